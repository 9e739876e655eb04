"""
Configuración del Laboratorio de Ceros y Huecos
===============================================

Parámetros por defecto, rangos de validación, errores propios y
configuración de logging compartidos por todos los módulos.

Versión: 1.0
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

VERSION_HERRAMIENTA = "1.0.0"
NOMBRE_HERRAMIENTA = "labzeta"


# ==========================================
# 1. PARÁMETROS NUMÉRICOS
# ==========================================
@dataclass
class ParametrosZeta:
    """Parámetros del motor de la función Z de Hardy."""

    TOLERANCIA: float = 1e-9
    # Debajo de esta altura se usa Euler–Maclaurin directo
    ALTURA_RIEMANN_SIEGEL: float = 200.0
    # Debajo de este |t| theta se evalúa con log-Gamma directo
    UMBRAL_THETA_ASINTOTICA: float = 10.0
    ALTURA_MAXIMA: float = 1.0e5
    FACTOR_SUBDIVISION: int = 8
    RONDAS_SUBDIVISION: int = 3
    BLOQUES_POR_LOTE: int = 256
    ITERACIONES_NEWTON_GRAM: int = 8
    TERMINOS_BERNOULLI: int = 14
    VERSION_CACHE: str = "v1"


@dataclass
class ParametrosPrimos:
    """Parámetros de la criba segmentada."""

    TAMANO_SEGMENTO: int = 2 ** 20   # casillas impares por segmento
    TECHO_CRIBA: int = 10 ** 9
    FACTORIAL_MAXIMO: int = 20
    PRIMORIAL_MAXIMO: int = 15
    VERSION_CACHE: str = "v1"


@dataclass
class ParametrosDirichlet:
    """Parámetros de caracteres y funciones L."""

    MODULO_MAXIMO_CARACTERES: int = 100
    MODULO_MAXIMO_CEROS: int = 11
    ALTURA_MAXIMA_L: float = 1.0e3
    PUNTOS_POR_CERO: int = 10
    TOLERANCIA_GAUSS: float = 1e-9
    EPSILON_PRIMO_MINIMO: float = 1.0


@dataclass
class ParametrosEjecucion:
    """Valores por defecto de la línea de comandos."""

    T_MAX: float = 5000.0
    X_MAX: int = 10 ** 7
    TOLERANCIA: float = 1e-9
    BINS: int = 12
    A_PAR: float = 0.0
    B_PAR: float = 3.0
    SEMILLA: int = 0
    HILOS: int = 1
    FORMATO: str = "csv"
    DIRECTORIO_CACHE: str = ".labzeta_cache"
    VARIABLE_CACHE: str = "LABZETA_CACHE"


# Instancias globales (singleton)
params_zeta = ParametrosZeta()
params_primos = ParametrosPrimos()
params_dirichlet = ParametrosDirichlet()
params_ejecucion = ParametrosEjecucion()


# Rangos de validación
VALIDACION = {
    't_min': 0.0,
    't_max': params_zeta.ALTURA_MAXIMA,
    'tol_min': 1e-13,
    'tol_max': 1e-2,
    'x_min': 10,
    'x_max': params_primos.TECHO_CRIBA,
    'bins_min': 1,
    'bins_max': 10000,
    'hilos_min': 1,
    'hilos_max': 256,
    'q_min': 3,
    'q_max_ceros': params_dirichlet.MODULO_MAXIMO_CEROS,
    'q_max': params_dirichlet.MODULO_MAXIMO_CARACTERES,
}


# ==========================================
# 2. ERRORES PROPIOS
# ==========================================
class ErrorLaboratorio(Exception):
    """Error base; lleva el código de salida de la línea de comandos."""

    codigo: int = 4


class ErrorPrerrequisito(ErrorLaboratorio):
    """Falta una caché que otro comando debe producir primero."""

    codigo = 3

    def __init__(self, comandos: Tuple[str, ...]):
        self.comandos = tuple(comandos)
        super().__init__(
            "Faltan cachés; ejecute primero: " + ", ".join(self.comandos)
        )


class ErrorVersionCache(ErrorLaboratorio):
    """La caché en disco tiene una versión distinta a la esperada."""

    codigo = 3


class ErrorVerificacion(ErrorLaboratorio):
    """Verificación interna fallida (déficit de Turing, bloque marcado)."""

    codigo = 4


# ==========================================
# 3. VALIDACIÓN
# ==========================================
def validar_parametros(t_max: Optional[float] = None,
                       tol: Optional[float] = None,
                       x_max: Optional[int] = None,
                       bins: Optional[int] = None,
                       a: Optional[float] = None,
                       b: Optional[float] = None,
                       hilos: Optional[int] = None) -> Tuple[bool, str]:
    """
    Valida los parámetros numéricos de una ejecución.

    Retorna:
        tuple: (es_valido, mensaje_error)
    """
    errores = []

    if t_max is not None and not (VALIDACION['t_min'] < t_max <= VALIDACION['t_max']):
        errores.append(f"--t-max debe estar entre {VALIDACION['t_min']} y {VALIDACION['t_max']}")

    if tol is not None and not (VALIDACION['tol_min'] <= tol <= VALIDACION['tol_max']):
        errores.append(f"--tol debe estar entre {VALIDACION['tol_min']} y {VALIDACION['tol_max']}")

    if x_max is not None and not (VALIDACION['x_min'] <= x_max <= VALIDACION['x_max']):
        errores.append(f"--x-max debe estar entre {VALIDACION['x_min']} y {VALIDACION['x_max']}")

    if bins is not None and not (VALIDACION['bins_min'] <= bins <= VALIDACION['bins_max']):
        errores.append(f"--bins debe estar entre {VALIDACION['bins_min']} y {VALIDACION['bins_max']}")

    if a is not None and a < 0:
        errores.append("--a no puede ser negativo")

    if a is not None and b is not None and b <= a:
        errores.append(f"--b ({b}) debe ser mayor que --a ({a})")

    if hilos is not None and not (VALIDACION['hilos_min'] <= hilos <= VALIDACION['hilos_max']):
        errores.append(f"--threads debe estar entre {VALIDACION['hilos_min']} y {VALIDACION['hilos_max']}")

    return len(errores) == 0, " | ".join(errores) if errores else ""


# ==========================================
# 4. LOGGING
# ==========================================
def configurar_logging(detallado: bool = False) -> None:
    """Configura el logging raíz; los mensajes van a stderr."""
    logging.basicConfig(
        level=logging.DEBUG if detallado else logging.INFO,
        format='%(asctime)s - %(levelname)s - %(message)s'
    )

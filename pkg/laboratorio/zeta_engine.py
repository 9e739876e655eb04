"""
Motor de la Función Z de Hardy
==============================

Evalúa la fase de Riemann–Siegel theta(t) y la función Z(t) en la línea
crítica, aísla los ceros por bloques de Gram, los refina por bisección
diádica y verifica la completitud de cada lista contra el conteo de
Riemann–von Mangoldt.

Convención: Z(t) = e^{iθ(t)} ζ(1/2 + it). Con la convención opuesta
e^{-iθ(t)} sólo cambia el signo de Z, lo que no afecta a los ceros.

Versión: 1.0
"""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import Polynomial
from scipy.special import bernoulli, lambertw, loggamma

from .configuracion import ErrorVerificacion, ErrorVersionCache, params_zeta
from . import salidas

logger = logging.getLogger(__name__)

Real = Union[float, np.ndarray]

CONVENCION_Z = "Z(t) = exp(i*theta(t)) * zeta(1/2 + i t)"
DOS_PI = 2.0 * math.pi


# ==========================================
# 1. TIPOS DE DOMINIO
# ==========================================
@dataclass(frozen=True)
class ZetaZero:
    """Un cero no trivial: índice n (desde 1), ordenada γₙ y semiancho del intervalo."""

    index: int
    gamma: float
    uncertainty: float


@dataclass(frozen=True)
class GramPoint:
    """Punto de Gram: theta(t) = nπ."""

    index: int
    t: float


@dataclass(frozen=True)
class ZeroVerification:
    """Resultado de la verificación tipo Turing de una lista de ceros."""

    t_max: float
    zeros_found: int
    count_expected: float
    s_residual: float
    complete: bool
    gram_index: Optional[int] = None
    gram_count_ok: Optional[bool] = None


@dataclass(frozen=True)
class BloqueGram:
    """Bloque entre dos puntos de Gram buenos consecutivos."""

    n_inicio: int
    n_fin: int
    t_inicio: float
    t_fin: float
    esperados: int
    encontrados: int
    rondas: int


@dataclass
class ResultadoBusqueda:
    ceros: List[ZetaZero] = field(default_factory=list)
    bloques_marcados: List[BloqueGram] = field(default_factory=list)
    bloques_revisados: int = 0


# ==========================================
# 2. FASE DE RIEMANN–SIEGEL
# ==========================================
def _como_arreglo(t: Real, nombre: str = "t") -> Tuple[np.ndarray, bool]:
    escalar = np.ndim(t) == 0
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{nombre} debe ser finito")
    return arr, escalar


def _devolver(arr: np.ndarray, escalar: bool) -> Real:
    return float(arr[0]) if escalar else arr


@lru_cache(maxsize=None)
def _coeficientes_theta(terminos: int = 5) -> Tuple[float, ...]:
    # (1 - 2^{1-2k}) |B_2k| / (4k(2k-1)), coeficiente de t^{-(2k-1)}
    b = bernoulli(2 * terminos)
    return tuple(
        (1.0 - 2.0 ** (1 - 2 * k)) * abs(b[2 * k]) / (4 * k * (2 * k - 1))
        for k in range(1, terminos + 1)
    )


def _theta_asintotica(t: np.ndarray) -> np.ndarray:
    at = np.abs(t)
    valor = 0.5 * at * np.log(at / DOS_PI) - 0.5 * at - math.pi / 8.0
    potencia = 1.0 / at
    inv2 = potencia * potencia
    for c in _coeficientes_theta():
        valor = valor + c * potencia
        potencia = potencia * inv2
    return np.sign(t) * valor


def _theta_directa(t: np.ndarray) -> np.ndarray:
    return np.imag(loggamma(0.25 + 0.5j * t)) - 0.5 * t * math.log(math.pi)


def theta(t: Real) -> Real:
    """
    Fase de Riemann–Siegel θ(t) = arg Γ(1/4 + it/2) − (t/2) log π.

    Usa la expansión asintótica para |t| ≥ UMBRAL_THETA_ASINTOTICA y
    log-Gamma complejo (scipy) por debajo. Es impar en t.
    """
    arr, escalar = _como_arreglo(t)
    umbral = params_zeta.UMBRAL_THETA_ASINTOTICA
    grande = np.abs(arr) >= umbral
    salida = np.empty_like(arr)
    if grande.any():
        salida[grande] = _theta_asintotica(arr[grande])
    if (~grande).any():
        salida[~grande] = _theta_directa(arr[~grande])
    return _devolver(salida, escalar)


def _theta_derivada(t: np.ndarray) -> np.ndarray:
    at = np.maximum(np.abs(t), 1.0)
    return 0.5 * np.log(at / DOS_PI) - 1.0 / (48.0 * at * at) - 7.0 / (1920.0 * at ** 4)


# ==========================================
# 3. FUNCIÓN Z DE HARDY
# ==========================================
@lru_cache(maxsize=None)
def _polinomios_correccion() -> Tuple[Polynomial, ...]:
    """
    Polinomios C₀…C₄ de Riemann–Siegel en la variable x = p − 1/2.

    Los coeficientes de Taylor de Ψ(p) = cos(2π(p² − p − 1/16))/cos(2πp)
    alrededor de p = 1/2 se obtienen con la fórmula integral de Cauchy
    discretizada (FFT) sobre el círculo |x| = 1; Ψ es entera.
    """
    puntos = 128
    x = np.exp(2j * math.pi * np.arange(puntos) / puntos)
    p = 0.5 + x
    psi_vals = np.cos(2 * math.pi * (p * p - p - 1.0 / 16.0)) / np.cos(2 * math.pi * p)
    coef = np.real(np.fft.fft(psi_vals)) / puntos
    coef = coef[:puntos // 2]
    coef[np.abs(coef) < 1e-17] = 0.0
    psi = Polynomial(coef)

    def d(m: int) -> Polynomial:
        return psi.deriv(m) if m > 0 else psi

    pi2, pi4, pi6, pi8 = math.pi ** 2, math.pi ** 4, math.pi ** 6, math.pi ** 8
    c0 = psi
    c1 = -d(3) / (96.0 * pi2)
    c2 = d(2) / (64.0 * pi2) + d(6) / (18432.0 * pi4)
    c3 = -d(1) / (64.0 * pi2) - d(5) / (3840.0 * pi4) - d(9) / (5308416.0 * pi6)
    c4 = (d(0) / (128.0 * pi2) + 19.0 * d(4) / (24576.0 * pi4)
          + 11.0 * d(8) / (5898240.0 * pi6) + d(12) / (2038431744.0 * pi8))
    return c0, c1, c2, c3, c4


def _z_riemann_siegel(t: np.ndarray) -> np.ndarray:
    a = np.sqrt(t / DOS_PI)
    n_terminos = np.floor(a).astype(np.int64)
    p = a - n_terminos
    fase = theta(t)
    suma = np.zeros_like(t)
    # acumulación columna a columna: el resultado no depende del lote
    for n in range(1, int(n_terminos.max()) + 1):
        termino = np.cos(fase - t * math.log(n)) / math.sqrt(n)
        suma = suma + np.where(n <= n_terminos, termino, 0.0)
    u = np.sqrt(DOS_PI / t)
    x = p - 0.5
    resto = np.zeros_like(t)
    potencia = np.ones_like(t)
    for c in _polinomios_correccion():
        resto = resto + c(x) * potencia
        potencia = potencia * u
    signo = np.where(n_terminos % 2 == 1, 1.0, -1.0)
    return 2.0 * suma + signo * np.sqrt(u) * resto


@lru_cache(maxsize=None)
def _bernoulli_factorial(terminos: int) -> Tuple[float, ...]:
    b = bernoulli(2 * terminos)
    return tuple(b[2 * k] / math.factorial(2 * k) for k in range(1, terminos + 1))


def _cola_euler_maclaurin(s: np.ndarray, x: np.ndarray, terminos: int,
                          regularizada: bool = False) -> np.ndarray:
    """
    Σ_{m≥0} (x + m)^{-s} por Euler–Maclaurin con `terminos` correcciones.

    Con `regularizada` el término integral x^{1-s}/(s-1) se reemplaza por
    (x^{1-s} − 1)/(s−1), que es analítico en s = 1; la diferencia es una
    constante que se cancela en sumas de caracteres no principales.
    """
    log_x = np.log(x)
    x_s = np.exp(-s * log_x)
    if regularizada:
        z = (1.0 - s) * log_x
        pequeno = np.abs(z) < 1e-3
        serie = -log_x * (1.0 + z / 2.0 + z * z / 6.0 + z ** 3 / 24.0)
        directo = np.expm1(np.where(pequeno, 0.0, z)) / np.where(pequeno, 1.0, s - 1.0)
        integral = np.where(pequeno, serie, directo)
    else:
        integral = x * x_s / (s - 1.0)
    total = integral + 0.5 * x_s
    pochhammer = s.astype(complex)
    potencia = x_s / x
    inv_x2 = 1.0 / (x * x)
    for k, coef in enumerate(_bernoulli_factorial(terminos), start=1):
        total = total + coef * pochhammer * potencia
        pochhammer = pochhammer * (s + 2 * k - 1) * (s + 2 * k)
        potencia = potencia * inv_x2
    return total


def _zeta_euler_maclaurin(t: np.ndarray) -> np.ndarray:
    """ζ(1/2 + it) directo por Euler–Maclaurin (t ≥ 0, alturas bajas)."""
    s = 0.5 + 1j * t
    n_corte = 20 + np.ceil(np.abs(t)).astype(np.int64)
    suma = np.zeros(t.shape, dtype=complex)
    for n in range(1, int(n_corte.max())):
        ln = math.log(n)
        termino = (np.cos(t * ln) - 1j * np.sin(t * ln)) / math.sqrt(n)
        suma = suma + np.where(n < n_corte, termino, 0.0)
    return suma + _cola_euler_maclaurin(s, n_corte.astype(float), params_zeta.TERMINOS_BERNOULLI)


def hardy_z(t: Real) -> Real:
    """
    Función Z de Hardy, real en la recta real.

    Para t ≥ ALTURA_RIEMANN_SIEGEL usa la suma principal de Riemann–Siegel
    con las correcciones C₀…C₄; por debajo (incluido t < 2π, fuera del
    dominio de validez de la fórmula asintótica) evalúa ζ(1/2 + it) por
    Euler–Maclaurin y rota con e^{iθ(t)}.
    """
    arr, escalar = _como_arreglo(t)
    if np.any(arr < 0):
        raise ValueError("hardy_z requiere t ≥ 0")
    salida = np.empty_like(arr)
    alto = arr >= params_zeta.ALTURA_RIEMANN_SIEGEL
    if alto.any():
        salida[alto] = _z_riemann_siegel(arr[alto])
    if (~alto).any():
        tb = arr[~alto]
        salida[~alto] = np.real(np.exp(1j * theta(tb)) * _zeta_euler_maclaurin(tb))
    return _devolver(salida, escalar)


def zeta_critical(t: Real) -> Union[complex, np.ndarray]:
    """ζ(1/2 + it) complejo; para t < 0 usa la simetría de conjugación."""
    arr, escalar = _como_arreglo(t)
    at = np.abs(arr)
    valores = hardy_z(at) * np.exp(-1j * theta(at))
    valores = np.where(arr < 0, np.conj(valores), valores)
    return complex(valores[0]) if escalar else valores


# ==========================================
# 4. PUNTOS DE GRAM
# ==========================================
def _gram_t(indices: np.ndarray) -> np.ndarray:
    n = indices.astype(float)
    inicial = DOS_PI * np.exp(1.0 + np.real(lambertw((n + 0.125) / math.e)))
    t = inicial
    for _ in range(params_zeta.ITERACIONES_NEWTON_GRAM):
        t = t - (theta(t) - n * math.pi) / _theta_derivada(t)
    return t


def gram_points(n_lo: int, n_hi: int) -> List[GramPoint]:
    """Puntos de Gram gₙ para n_lo ≤ n ≤ n_hi (se admite n = −1 como andamiaje)."""
    if n_lo < -1 or n_hi < n_lo:
        raise ValueError(f"Rango de Gram inválido: [{n_lo}, {n_hi}]")
    indices = np.arange(n_lo, n_hi + 1)
    return [GramPoint(int(n), float(t)) for n, t in zip(indices, _gram_t(indices))]


def gram_index(t: float) -> int:
    """Índice n del mayor punto de Gram ≤ t (−1 por debajo de g₀)."""
    g_menos_uno = float(_gram_t(np.array([-1]))[0])
    if t < g_menos_uno:
        return -2
    return max(-1, int(math.floor(theta(t) / math.pi)))


# ==========================================
# 5. REFINAMIENTO DIÁDICO
# ==========================================
def nivel_diadico(tol: float) -> int:
    """Menor k con 2^{-k} ≤ 2·tol."""
    return int(math.ceil(math.log2(1.0 / (2.0 * tol))))


def refinar_diadico(funcion: Callable[[np.ndarray], np.ndarray],
                    lo: np.ndarray,
                    hi: np.ndarray,
                    signo_lo: np.ndarray,
                    tol: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Refina cada intervalo [lo, hi] con cambio de signo hasta la celda
    diádica [c·2^{-k}, (c+1)·2^{-k}] que contiene al cero.

    En cada paso se evalúa el diádico de menor nivel dentro de (lo, hi),
    de modo que la celda final no depende del intervalo inicial.

    Retorna:
        tuple: (gamma, semiancho) como arreglos
    """
    k = nivel_diadico(tol)
    ancho = math.ldexp(1.0, -k)
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    signo_lo = np.array(signo_lo, dtype=float)
    activos = np.ones(lo.shape, dtype=bool)
    nivel_inicial = -int(math.ceil(math.log2(max(1.0, float(np.max(hi, initial=1.0)))))) - 1

    while activos.any():
        idx = np.nonzero(activos)[0]
        a, b = lo[idx], hi[idx]
        punto = np.full(a.shape, np.nan)
        for j in range(nivel_inicial, k + 1):
            pendiente = np.isnan(punto)
            if not pendiente.any():
                break
            m = np.floor(np.ldexp(a, j)) + 1.0
            candidato = np.ldexp(m, -j)
            ok = pendiente & (candidato < b)
            punto = np.where(ok, candidato, punto)
        sin_punto = np.isnan(punto)
        if sin_punto.any():
            terminados = idx[sin_punto]
            base = np.floor(np.ldexp(lo[terminados], k))
            lo[terminados] = np.ldexp(base, -k)
            hi[terminados] = lo[terminados] + ancho
            activos[terminados] = False
        con_punto = ~sin_punto
        if con_punto.any():
            sel = idx[con_punto]
            d = punto[con_punto]
            valores = np.asarray(funcion(d), dtype=float)
            mismo = np.where(valores >= 0, 1.0, -1.0) == signo_lo[sel]
            lo[sel] = np.where(mismo, d, lo[sel])
            hi[sel] = np.where(mismo, hi[sel], d)

    return lo + 0.5 * ancho, np.full(lo.shape, 0.5 * ancho)


# ==========================================
# 6. AISLAMIENTO POR BLOQUES DE GRAM
# ==========================================
def _signo(valores: np.ndarray) -> np.ndarray:
    return np.where(valores >= 0, 1.0, -1.0)


def _malla_bloque(g: np.ndarray, sub: int) -> np.ndarray:
    if sub == 1:
        return g
    fracciones = np.arange(sub) / sub
    interiores = g[:-1, None] + (g[1:] - g[:-1])[:, None] * fracciones[None, :]
    return np.concatenate([interiores.ravel(), g[-1:]])


def _procesar_lote(bloques: Sequence[Tuple[int, np.ndarray, np.ndarray]],
                   tol: float) -> Tuple[List[ZetaZero], List[BloqueGram]]:
    """Aísla y refina los ceros de un lote de bloques (n_inicio, g, z(g))."""
    factor = params_zeta.FACTOR_SUBDIVISION
    rondas_max = params_zeta.RONDAS_SUBDIVISION
    mallas = [g for _, g, _ in bloques]
    valores = [z for _, _, z in bloques]
    rondas = [0] * len(bloques)

    def cuenta(i: int) -> int:
        s = _signo(valores[i])
        return int(np.count_nonzero(s[:-1] != s[1:]))

    pendientes = [i for i, (_, g, _) in enumerate(bloques) if cuenta(i) < len(g) - 1]
    for ronda in range(1, rondas_max + 1):
        if not pendientes:
            break
        sub = factor ** ronda
        nuevas = {}
        puntos = []
        for i in pendientes:
            g = bloques[i][1]
            malla = _malla_bloque(g, sub)
            nuevas[i] = malla
            puntos.append(malla)
        todos = np.concatenate(puntos)
        z_todos = np.asarray(hardy_z(todos))
        inicio = 0
        for i in pendientes:
            malla = nuevas[i]
            z = z_todos[inicio:inicio + len(malla)]
            inicio += len(malla)
            # extremos de Gram con los valores ya conocidos
            z[::sub] = bloques[i][2]
            mallas[i], valores[i], rondas[i] = malla, z, ronda
        pendientes = [i for i in pendientes if cuenta(i) < len(bloques[i][1]) - 1]

    marcados = []
    lo_l, hi_l, s_l, dueno = [], [], [], []
    for i, (n_inicio, g, _) in enumerate(bloques):
        esperados = len(g) - 1
        s = _signo(valores[i])
        cambios = np.nonzero(s[:-1] != s[1:])[0]
        if len(cambios) != esperados:
            marcados.append(BloqueGram(n_inicio, n_inicio + esperados, float(g[0]), float(g[-1]),
                                       esperados, len(cambios), rondas[i]))
            logger.warning(
                f"Bloque de Gram [{n_inicio}, {n_inicio + esperados}] sin resolver: "
                f"{len(cambios)} cambios de signo para {esperados} ceros esperados"
            )
        lo_l.append(mallas[i][cambios])
        hi_l.append(mallas[i][cambios + 1])
        s_l.append(s[cambios])
        dueno.append(np.full(len(cambios), i))

    ceros: List[ZetaZero] = []
    if lo_l and sum(len(x) for x in lo_l):
        gammas, semi = refinar_diadico(hardy_z, np.concatenate(lo_l), np.concatenate(hi_l),
                                       np.concatenate(s_l), tol)
        duenos = np.concatenate(dueno)
        posicion = 0
        for i, (n_inicio, _, _) in enumerate(bloques):
            cantidad = int(np.count_nonzero(duenos == i))
            for k in range(cantidad):
                # ceros bajo un punto de Gram bueno g_j: j + 1
                ceros.append(ZetaZero(n_inicio + 2 + k, float(gammas[posicion]), float(semi[posicion])))
                posicion += 1
    return ceros, marcados


def _tabla_gram(n_a: int, n_b: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Extiende [n_a, n_b] hasta puntos de Gram buenos en ambos extremos."""
    paso = 16
    bajo, alto = max(-1, n_a - paso), n_b + paso
    while True:
        indices = np.arange(bajo, alto + 1)
        t_g = _gram_t(indices)
        z_g = np.asarray(hardy_z(t_g))
        buenos = np.where(indices % 2 == 0, 1.0, -1.0) * z_g > 0
        izquierda = buenos & (indices <= n_a)
        derecha = buenos & (indices >= n_b)
        if (izquierda.any() or bajo == -1) and derecha.any():
            return indices, t_g, z_g
        if not izquierda.any() and bajo > -1:
            bajo = max(-1, bajo - paso)
        if not derecha.any():
            alto += paso


def buscar_ceros(t_lo: float, t_hi: float, tol: float = None, hilos: int = 1) -> ResultadoBusqueda:
    """Búsqueda completa con bloques marcados; `find_zeros` devuelve sólo los ceros."""
    tol = params_zeta.TOLERANCIA if tol is None else tol
    if not (math.isfinite(t_lo) and math.isfinite(t_hi)):
        raise ValueError("Los extremos del rango deben ser finitos")
    if t_lo < 0 or t_hi < t_lo:
        raise ValueError(f"Rango inválido: 0 ≤ t_lo ({t_lo}) ≤ t_hi ({t_hi}) es requerido")
    if tol <= 0:
        raise ValueError("La tolerancia debe ser positiva")
    if t_hi > params_zeta.ALTURA_MAXIMA:
        raise ValueError(f"t_hi ({t_hi}) supera la altura máxima {params_zeta.ALTURA_MAXIMA}")
    resultado = ResultadoBusqueda()
    if t_hi == t_lo:
        return resultado

    n_a = max(-1, gram_index(t_lo))
    n_b = max(gram_index(t_hi) + 1, n_a + 1)
    indices, t_g, z_g = _tabla_gram(n_a, n_b)
    buenos_pos = np.nonzero(np.where(indices % 2 == 0, 1.0, -1.0) * z_g > 0)[0]
    if indices[0] == -1 and (len(buenos_pos) == 0 or buenos_pos[0] != 0):
        buenos_pos = np.concatenate([[0], buenos_pos])
    inicio = buenos_pos[indices[buenos_pos] <= n_a].max()
    fin = buenos_pos[indices[buenos_pos] >= n_b].min()
    limites = buenos_pos[(buenos_pos >= inicio) & (buenos_pos <= fin)]

    bloques = [
        (int(indices[i]), t_g[i:j + 1], z_g[i:j + 1])
        for i, j in zip(limites[:-1], limites[1:])
    ]
    tam = params_zeta.BLOQUES_POR_LOTE
    lotes = [bloques[i:i + tam] for i in range(0, len(bloques), tam)]
    if hilos > 1 and len(lotes) > 1:
        with ThreadPoolExecutor(max_workers=hilos) as ejecutor:
            parciales = list(ejecutor.map(lambda lote: _procesar_lote(lote, tol), lotes))
    else:
        parciales = [_procesar_lote(lote, tol) for lote in lotes]

    for ceros, marcados in parciales:
        resultado.ceros.extend(z for z in ceros if t_lo <= z.gamma < t_hi)
        resultado.bloques_marcados.extend(marcados)
    resultado.bloques_revisados = len(bloques)
    logger.info(
        f"Ceros en [{t_lo}, {t_hi}): {len(resultado.ceros)} "
        f"({len(bloques)} bloques de Gram, {len(resultado.bloques_marcados)} marcados)"
    )
    return resultado


def find_zeros(t_lo: float, t_hi: float, tol: float = None, hilos: int = 1) -> List[ZetaZero]:
    """
    Ceros de Z en [t_lo, t_hi) refinados a `tol`, con índices globales.

    Los bloques que no cuadran tras las subdivisiones se registran con
    `logger.warning`; use `buscar_ceros` para obtenerlos.
    """
    return buscar_ceros(t_lo, t_hi, tol, hilos).ceros


# ==========================================
# 7. CONTEO Y VERIFICACIÓN
# ==========================================
def count_zeros_main_term(T: float) -> float:
    """(T/2π) log(T/2π) − T/2π + 7/8."""
    if not T > DOS_PI:
        raise ValueError(f"El término principal requiere T > 2π (T = {T})")
    x = T / DOS_PI
    return x * math.log(x) - x + 7.0 / 8.0


def _ultimo_gram_bueno(T: float, busqueda: int = 64) -> Optional[Tuple[int, float]]:
    n = gram_index(T)
    if n < -1:
        return None
    indices = np.arange(max(-1, n - busqueda + 1), n + 1)
    t_g = _gram_t(indices)
    z_g = np.asarray(hardy_z(t_g))
    buenos = np.nonzero(np.where(indices % 2 == 0, 1.0, -1.0) * z_g > 0)[0]
    if len(buenos) == 0:
        return None
    i = buenos[-1]
    return int(indices[i]), float(t_g[i])


def verify_count(zeros: Sequence[ZetaZero], T: float) -> ZeroVerification:
    """
    Verificación tipo Turing: compara el conteo con el término principal y,
    en el último punto de Gram bueno g_j ≤ T, exige exactamente j + 1 ceros.
    """
    gammas = np.array([z.gamma for z in zeros], dtype=float)
    encontrados = int(np.count_nonzero(gammas <= T))
    if T <= DOS_PI:
        return ZeroVerification(T, encontrados, 0.0, float(encontrados), encontrados == 0)

    esperado = count_zeros_main_term(T)
    residuo = encontrados - esperado
    gram = _ultimo_gram_bueno(T)
    gram_ok = None
    indice = None
    if gram is not None:
        indice, t_g = gram
        gram_ok = int(np.count_nonzero(gammas <= t_g)) == indice + 1
    completo = abs(residuo) < 2.0 and gram_ok is not False
    if not completo:
        logger.warning(f"Verificación incompleta en T={T}: encontrados={encontrados}, S≈{residuo:.3f}")
    return ZeroVerification(T, encontrados, esperado, residuo, completo, indice, gram_ok)


def s_residual_curve(zeros: Sequence[ZetaZero], alturas: Sequence[float]) -> np.ndarray:
    """Proxy empírico de S(T): N(T) encontrado menos el conteo suave, en cada altura."""
    gammas = np.sort(np.array([z.gamma for z in zeros], dtype=float))
    alturas = np.asarray(alturas, dtype=float)
    encontrados = np.searchsorted(gammas, alturas, side='right')
    return np.array([n - count_zeros_main_term(T) for n, T in zip(encontrados, alturas)])


def gram_law_stats(t_lo: float, t_hi: float, zeros: Sequence[ZetaZero]) -> dict:
    """Fracción de puntos de Gram buenos e intervalos de Gram con exactamente un cero."""
    n_a = max(-1, gram_index(max(t_lo, 10.0)))
    n_b = gram_index(t_hi)
    if n_b <= n_a:
        return {'puntos': 0, 'fraccion_buenos': None, 'fraccion_un_cero': None}
    indices = np.arange(n_a, n_b + 1)
    t_g = _gram_t(indices)
    z_g = np.asarray(hardy_z(t_g))
    buenos = np.where(indices % 2 == 0, 1.0, -1.0) * z_g > 0
    gammas = np.sort(np.array([z.gamma for z in zeros], dtype=float))
    por_intervalo = np.diff(np.searchsorted(gammas, t_g))
    return {
        'puntos': int(len(indices)),
        'fraccion_buenos': float(np.mean(buenos)),
        'fraccion_un_cero': float(np.mean(por_intervalo == 1)),
    }


def modulus_report(t_lo: float, t_hi: float, muestras: int = 20000) -> dict:
    """Máximo de |Z(t)| en una malla frente a la forma de convexidad t^{1/6}."""
    t = np.linspace(max(t_lo, 1.0), t_hi, muestras)
    modulo = np.abs(np.asarray(hardy_z(t)))
    i = int(np.argmax(modulo))
    return {
        'convencion': CONVENCION_Z,
        't_max_modulo': float(t[i]),
        'max_modulo': float(modulo[i]),
        'max_cociente_convexidad': float(np.max(modulo / t ** (1.0 / 6.0))),
    }


# ==========================================
# 8. CACHÉ DE CEROS
# ==========================================
class CacheCeros:
    """
    Caché de ceros en texto: cabecera `zerocache v1 tol=<tol>`, luego líneas
    `n,gamma,uncertainty` (gamma con 12 cifras significativas) y marcas
    `# t_max=<T>` de cobertura. Sólo se agregan líneas al extender.
    """

    NOMBRE = "zeros.zerocache"

    def __init__(self, directorio: str):
        self.ruta = os.path.join(directorio, self.NOMBRE)

    @staticmethod
    def cabecera(tol: float) -> str:
        return f"zerocache {params_zeta.VERSION_CACHE} tol={tol!r}"

    def existe(self) -> bool:
        return os.path.exists(self.ruta)

    def leer(self) -> Tuple[float, float, List[ZetaZero]]:
        """Lee y re-verifica la caché. Retorna (tol, t_max cubierto, ceros)."""
        with open(self.ruta, encoding='utf-8') as f:
            lineas = f.read().splitlines()
        if not lineas or not lineas[0].startswith(f"zerocache {params_zeta.VERSION_CACHE} tol="):
            raise ErrorVersionCache(
                f"Versión de caché incompatible en {self.ruta}: {lineas[0] if lineas else '(vacía)'}"
            )
        tol = float(lineas[0].split("tol=", 1)[1])
        cobertura = 0.0
        indices, gammas, semis = [], [], []
        for linea in lineas[1:]:
            if linea.startswith("# t_max="):
                cobertura = float(linea.split("=", 1)[1])
            elif linea.strip():
                n, g, u = linea.split(",")
                indices.append(int(n))
                gammas.append(float(g))
                semis.append(float(u))
        ceros = self._reverificar(np.array(indices), np.array(gammas), np.array(semis), tol)
        return tol, cobertura, ceros

    @staticmethod
    def _reverificar(indices: np.ndarray, gammas: np.ndarray, semis: np.ndarray,
                     tol: float) -> List[ZetaZero]:
        if len(gammas) == 0:
            return []
        if np.any(np.diff(indices) != 1):
            raise ErrorVerificacion("Índices no consecutivos en la caché de ceros")
        # 12 cifras significativas: error de impresión ≤ media unidad de la 12.ª cifra
        redondeo = 0.5 * 10.0 ** (np.floor(np.log10(gammas)) - 11)
        lo = gammas - semis - redondeo
        hi = gammas + semis + redondeo
        s_lo = _signo(np.asarray(hardy_z(lo)))
        s_hi = _signo(np.asarray(hardy_z(hi)))
        fallidos = np.nonzero(s_lo == s_hi)[0]
        if len(fallidos):
            raise ErrorVerificacion(
                f"{len(fallidos)} ceros de la caché no verifican cambio de signo (primero n={indices[fallidos[0]]})"
            )
        g, u = refinar_diadico(hardy_z, lo, hi, s_lo, tol)
        return [ZetaZero(int(n), float(a), float(b)) for n, a, b in zip(indices, g, u)]

    @staticmethod
    def _lineas(ceros: Sequence[ZetaZero]) -> List[str]:
        return [f"{z.index},{z.gamma:.12g},{z.uncertainty!r}" for z in ceros]

    def extender(self, t_max: float, tol: float = None, hilos: int = 1) -> List[ZetaZero]:
        """Extiende la caché hasta t_max y devuelve todos los ceros ≤ t_max."""
        tol = params_zeta.TOLERANCIA if tol is None else tol
        if not self.existe():
            resultado = buscar_ceros(0.0, t_max, tol, hilos)
            if resultado.bloques_marcados:
                raise ErrorVerificacion(f"{len(resultado.bloques_marcados)} bloques de Gram sin resolver")
            contenido = "\n".join([self.cabecera(tol)] + self._lineas(resultado.ceros)
                                  + [f"# t_max={t_max!r}"]) + "\n"
            salidas.escribir_atomico(self.ruta, contenido)
            return resultado.ceros

        tol_cache, cobertura, ceros = self.leer()
        if tol_cache != tol:
            raise ErrorVersionCache(f"La caché usa tol={tol_cache!r}, se pidió tol={tol!r}")
        if t_max <= cobertura:
            return [z for z in ceros if z.gamma < t_max]
        resultado = buscar_ceros(cobertura, t_max, tol, hilos)
        if resultado.bloques_marcados:
            raise ErrorVerificacion(f"{len(resultado.bloques_marcados)} bloques de Gram sin resolver")
        nuevos = resultado.ceros
        if ceros and nuevos and nuevos[0].index != ceros[-1].index + 1:
            raise ErrorVerificacion("La extensión no continúa la numeración de la caché")
        with open(self.ruta, 'a', encoding='utf-8') as f:
            for linea in self._lineas(nuevos) + [f"# t_max={t_max!r}"]:
                f.write(linea + "\n")
        logger.info(f"Caché de ceros extendida de {cobertura} a {t_max}: {len(nuevos)} ceros nuevos")
        return ceros + nuevos

"""
Estadísticas de Espaciamiento
=============================

Convierte listas de ceros y flujos de huecos en estadísticas:
espaciamientos normalizados, extremos, correlación de pares frente al
núcleo GUE, factor de forma, ley de Poisson de huecos, reporte de cotas
de separación y la sonda de caminata de Cauchy.

Versión: 1.0
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import integrate

from .configuracion import params_ejecucion
from .zeta_engine import ZetaZero, hardy_z, theta

logger = logging.getLogger(__name__)

DOS_PI = 2.0 * math.pi
BLOQUE_FILAS = 512


# ==========================================
# 1. TIPOS DE DOMINIO
# ==========================================
@dataclass(frozen=True)
class SpacingSample:
    """Espaciamiento entre γₙ y γₙ₊₁; delta = raw · log(γₙ/2π)/(2π)."""

    n: int
    gamma_n: float
    raw: float
    delta: float


@dataclass(frozen=True)
class PairBin:
    a: float
    b: float
    count: int
    normalized_density: float
    gue_reference: float

    @property
    def gue_density(self) -> float:
        """Integral GUE dividida por el ancho: comparable con normalized_density."""
        return self.gue_reference / (self.b - self.a)


@dataclass
class PairCorrelationEstimate:
    bins: List[PairBin]
    T: float
    zero_count: int
    escala: str = "local"

    def desviaciones(self) -> np.ndarray:
        return np.array([abs(b.normalized_density - b.gue_density) for b in self.bins])


@dataclass
class ExtremesReport:
    min_delta: float
    min_index: int
    min_height: float
    max_delta: float
    max_index: int
    max_height: float
    media: float
    c0_ajustada: Optional[float]
    c1_ajustada: Optional[float]
    thresholds_small: Optional[int]
    thresholds_large: Optional[int]
    minimos_corrientes: List[Tuple[int, float]] = field(default_factory=list)
    maximos_corrientes: List[Tuple[int, float]] = field(default_factory=list)


class ResultadoCauchy(NamedTuple):
    suma: float
    desviacion: float
    tasa_rechazo: float


Ordenadas = Union[Sequence[ZetaZero], Sequence[float], np.ndarray]


def _ordenadas(zeros: Ordenadas) -> np.ndarray:
    if len(zeros) and isinstance(zeros[0], ZetaZero):
        return np.array([z.gamma for z in zeros], dtype=float)
    return np.asarray(zeros, dtype=float)


def _arreglos(samples: Sequence[SpacingSample]) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    n = np.array([s.n for s in samples], dtype=np.int64)
    g = np.array([s.gamma_n for s in samples], dtype=float)
    raw = np.array([s.raw for s in samples], dtype=float)
    delta = np.array([s.delta for s in samples], dtype=float)
    return n, g, raw, delta


# ==========================================
# 2. ESPACIAMIENTOS NORMALIZADOS Y EXTREMOS
# ==========================================
def normalize_spacings(zeros: Sequence[ZetaZero]) -> List[SpacingSample]:
    """Un SpacingSample por cada par consecutivo de ceros."""
    if len(zeros) < 2:
        raise ValueError("Se requieren al menos dos ceros")
    g = _ordenadas(zeros)
    indices = [z.index for z in zeros] if isinstance(zeros[0], ZetaZero) else list(range(1, len(g) + 1))
    raw = np.diff(g)
    if np.any(raw <= 0):
        i = int(np.argmax(raw <= 0))
        raise ValueError(f"Ordenadas no estrictamente crecientes en la posición {i}: {g[i]} → {g[i + 1]}")
    delta = raw * np.log(g[:-1] / DOS_PI) / DOS_PI
    return [SpacingSample(int(n), float(a), float(r), float(d))
            for n, a, r, d in zip(indices[:-1], g[:-1], raw, delta)]


def _forma_pequena(g: np.ndarray) -> np.ndarray:
    lg = np.log(g)
    return np.log(lg) ** 2 / lg ** 1.5


def _forma_grande(g: np.ndarray) -> np.ndarray:
    """log log γ · log log log log γ; NaN donde el logaritmo cuádruple no es positivo."""
    with np.errstate(invalid='ignore', divide='ignore'):
        l2 = np.log(np.log(g))
        l4 = np.log(np.log(l2))
    return np.where(np.isfinite(l4) & (l4 > 0), l2 * l4, np.nan)


def _corrientes(valores: np.ndarray, minimo: bool) -> np.ndarray:
    acumulado = np.minimum.accumulate(valores) if minimo else np.maximum.accumulate(valores)
    nuevos = np.concatenate([[True], acumulado[1:] != acumulado[:-1]])
    return np.flatnonzero(nuevos)


def extremes_report(samples: Sequence[SpacingSample]) -> ExtremesReport:
    """
    Mínimo y máximo corrientes de delta, con constantes c₀, c₁ ajustadas
    por mínimos cuadrados sobre los récords corrientes y el conteo de
    muestras por debajo / por encima de cada envolvente ajustada.
    """
    if len(samples) < 1:
        raise ValueError("Se requiere al menos un espaciamiento")
    n, g, _, delta = _arreglos(samples)
    i_min, i_max = int(np.argmin(delta)), int(np.argmax(delta))

    pos_min = _corrientes(delta, minimo=True)
    forma = _forma_pequena(g[pos_min])
    c0 = float(np.dot(forma, delta[pos_min]) / np.dot(forma, forma)) if len(pos_min) else None
    bajo = int(np.count_nonzero(delta < c0 * _forma_pequena(g))) if c0 is not None else None

    pos_max = _corrientes(delta, minimo=False)
    forma_g = _forma_grande(g[pos_max])
    definida = np.isfinite(forma_g)
    c1, alto = None, None
    if definida.any():
        f = forma_g[definida]
        c1 = float(np.dot(f, delta[pos_max][definida]) / np.dot(f, f))
        envolvente = c1 * _forma_grande(g)
        alto = int(np.count_nonzero(np.isfinite(envolvente) & (delta > envolvente)))

    return ExtremesReport(
        min_delta=float(delta[i_min]), min_index=int(n[i_min]), min_height=float(g[i_min]),
        max_delta=float(delta[i_max]), max_index=int(n[i_max]), max_height=float(g[i_max]),
        media=float(np.mean(delta)),
        c0_ajustada=c0, c1_ajustada=c1,
        thresholds_small=bajo, thresholds_large=alto,
        minimos_corrientes=[(int(n[i]), float(delta[i])) for i in pos_min],
        maximos_corrientes=[(int(n[i]), float(delta[i])) for i in pos_max],
    )


def spacing_histogram(samples: Sequence[SpacingSample], bins: int = 30, s_max: float = 3.0) -> List[Dict]:
    """
    Histograma de delta frente a la conjetura de Wigner para GUE,
    (32/π²)s²e^{-4s²/π}, y a la ley de Poisson e^{-s}; referencias
    integradas sobre cada casilla.
    """
    _, _, _, delta = _arreglos(samples)
    bordes = np.linspace(0.0, s_max, bins + 1)
    conteo, _ = np.histogram(delta, bins=bordes)
    ancho = bordes[1] - bordes[0]

    def wigner(s):
        return 32.0 / math.pi ** 2 * s * s * math.exp(-4.0 * s * s / math.pi)

    filas = []
    for a, b, c in zip(bordes[:-1], bordes[1:], conteo):
        gue, _ = integrate.quad(wigner, a, b)
        filas.append({
            'a': float(a), 'b': float(b), 'count': int(c),
            'densidad': float(c / (len(delta) * ancho)),
            'wigner_gue': gue / ancho,
            'poisson': (math.exp(-a) - math.exp(-b)) / ancho,
        })
    return filas


# ==========================================
# 3. CORRELACIÓN DE PARES
# ==========================================
def gue_integral(a: float, b: float) -> float:
    """∫ₐᵇ (1 − (sin πx/πx)²) dx por cuadratura adaptativa."""
    valor, _ = integrate.quad(lambda x: 1.0 - np.sinc(x) ** 2, a, b, limit=200)
    return float(valor)


def pair_correlation(zeros: Ordenadas, a: float, b: float, T: float, bins: int,
                     escala: str = "local") -> PairCorrelationEstimate:
    """
    Conteo de pares γₘ < γₙ ≤ T con diferencia escalada en [a, b).

    Escala "local": (γₙ − γₘ)·log(γₘ/2π)/(2π), igual que delta.
    Escala "montgomery": (γₙ − γₘ)·log T/(2π).
    Cada par no ordenado se cuenta una vez con su diferencia positiva; la
    densidad es conteo/(N(T)·ancho), comparable con 1 − sinc².
    """
    if not (0 <= a < b):
        raise ValueError(f"Ventana inválida: se requiere 0 ≤ a < b (a = {a}, b = {b})")
    if bins < 1:
        raise ValueError("bins debe ser al menos 1")
    if escala not in ("local", "montgomery"):
        raise ValueError(f"Escala desconocida: {escala}")
    g = np.sort(_ordenadas(zeros))
    g = g[g <= T]
    if len(g) == 0:
        raise ValueError(f"No hay ceros por debajo de T = {T}")

    if escala == "local":
        factor = np.log(g / DOS_PI) / DOS_PI
    else:
        factor = np.full(len(g), math.log(T) / DOS_PI)
    bordes = np.linspace(a, b, bins + 1)
    conteos = np.zeros(bins, dtype=np.int64)
    for inicio in range(0, len(g), BLOQUE_FILAS):
        filas = slice(inicio, min(inicio + BLOQUE_FILAS, len(g)))
        objetivo = g[filas, None] + bordes[None, :] / factor[filas, None]
        posiciones = np.searchsorted(g, objetivo.ravel(), side='left').reshape(objetivo.shape)
        propio = np.arange(filas.start, filas.stop)[:, None] + 1
        posiciones = np.maximum(posiciones, propio)
        conteos += np.diff(posiciones, axis=1).sum(axis=0)

    n_t = len(g)
    ancho = bordes[1:] - bordes[:-1]
    resultado = [
        PairBin(float(lo), float(hi), int(c), float(c / (n_t * w)), gue_integral(float(lo), float(hi)))
        for lo, hi, c, w in zip(bordes[:-1], bordes[1:], conteos, ancho)
    ]
    logger.info(f"Correlación de pares: N(T)={n_t}, T={T}, [{a}, {b}) en {bins} casillas, escala={escala}")
    return PairCorrelationEstimate(resultado, float(T), n_t, escala)


def form_factor(zeros: Ordenadas, alpha: float, T: float, normalizacion: str = "montgomery") -> float:
    """
    F(α, T) = c · Σ_{γ,γ′ ≤ T} w(γ − γ′) T^{iα(γ−γ′)}, w(x) = 4/(4 + x²).

    c = 2π/(T log T) ("montgomery") o 1/N(T) ("conteo"). Se devuelve la
    parte real; la imaginaria debe anularse por simetría conjugada.
    """
    if normalizacion not in ("montgomery", "conteo"):
        raise ValueError(f"Normalización desconocida: {normalizacion}")
    g = np.sort(_ordenadas(zeros))
    g = g[g <= T]
    if len(g) == 0:
        raise ValueError(f"T = {T} está por debajo del primer cero")
    frecuencia = alpha * math.log(T)
    real = 0.0
    imaginaria = 0.0
    for inicio in range(0, len(g), BLOQUE_FILAS):
        dif = g[inicio:inicio + BLOQUE_FILAS, None] - g[None, :]
        w = 4.0 / (4.0 + dif * dif)
        fase = frecuencia * dif
        real += float(np.sum(w * np.cos(fase)))
        imaginaria += float(np.sum(w * np.sin(fase)))
    diagonal = float(len(g))
    if abs(imaginaria) > 1e-8 * max(abs(real), diagonal):
        raise RuntimeError(f"Parte imaginaria no despreciable en F(α={alpha}): {imaginaria}")
    c = DOS_PI / (T * math.log(T)) if normalizacion == "montgomery" else 1.0 / len(g)
    return c * real


# ==========================================
# 4. HUECOS ENTRE PRIMOS: LEY DE POISSON
# ==========================================
def prime_gap_poisson(gaps: Iterable[Tuple[int, int]], x: int,
                      t_grid: Sequence[float]) -> List[Tuple[float, float, float]]:
    """
    Fracción empírica de n con dₙ/log pₙ ≤ t junto a 1 − e^{-t}.

    `gaps` es un flujo (pₙ, dₙ) como el de `gap_stream`; se consume por trozos.
    """
    if x < 100:
        raise ValueError(f"Se requiere x ≥ 100 (x = {x})")
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid < 0) or np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid debe ser no negativa y creciente")
    acumulado = np.zeros(len(t_grid), dtype=np.int64)
    total = 0
    flujo = iter(gaps)
    while True:
        trozo = list(itertools.islice(flujo, 1 << 16))
        if not trozo:
            break
        arreglo = np.array(trozo, dtype=float)
        arreglo = arreglo[arreglo[:, 0] <= x]
        cociente = np.sort(arreglo[:, 1] / np.log(arreglo[:, 0]))
        acumulado += np.searchsorted(cociente, t_grid, side='right')
        total += len(cociente)
    if total == 0:
        raise ValueError("Flujo de huecos vacío")
    return [(float(t), float(c / total), float(1.0 - math.exp(-t))) for t, c in zip(t_grid, acumulado)]


# ==========================================
# 5. COTAS DE SEPARACIÓN
# ==========================================
def zero_separation_probe(samples: Sequence[SpacingSample], exponente: float = 1.0 / 3.0) -> List[Dict]:
    """Mínimo por década de n de (γₙ₊₁ − γₙ)·γₙ^θ."""
    n, g, raw, _ = _arreglos(samples)
    producto = raw * g ** exponente
    decada = np.floor(np.log10(n)).astype(int)
    filas = []
    for k in np.unique(decada):
        en = np.flatnonzero(decada == k)
        i = en[np.argmin(producto[en])]
        filas.append({'decada': int(k), 'n': int(n[i]), 'minimo': float(producto[i])})
    return filas


def spacing_bound_report(samples: Sequence[SpacingSample], limite_alturas: int = 50) -> Dict:
    """
    Inferior 2π/log²γₙ ≤ γₙ₊₁ − γₙ (se espera sin violaciones) y superior
    π/log log γₙ, asintótica, reportada como excedencias con sus alturas.
    """
    if len(samples) < 1:
        raise ValueError("Se requiere al menos un espaciamiento")
    n, g, raw, _ = _arreglos(samples)
    lg = np.log(g)
    inferior = DOS_PI / lg ** 2
    superior = math.pi / np.log(lg)
    viol_inf = np.flatnonzero(raw < inferior)
    exc_sup = np.flatnonzero(raw > superior)
    separacion = zero_separation_probe(samples)
    minimos = [f['minimo'] for f in separacion]
    return {
        'muestras': int(len(raw)),
        'violaciones_inferior': int(len(viol_inf)),
        'alturas_violacion_inferior': [float(g[i]) for i in viol_inf[:limite_alturas]],
        'excedencias_superior': int(len(exc_sup)),
        'indices_excedencia_superior': [int(n[i]) for i in exc_sup[:limite_alturas]],
        'alturas_excedencia_superior': [float(g[i]) for i in exc_sup[:limite_alturas]],
        'excedencia_superior_asintotica': bool(len(exc_sup) > 0),
        'separacion_por_decada': separacion,
        'separacion_minima': float(min(minimos)),
        'separacion_creciente': bool(np.all(np.diff(minimos) > 0)) if len(minimos) > 1 else None,
    }


# ==========================================
# 6. SONDA DE CAMINATA DE CAUCHY
# ==========================================
def _parte_real_zeta(t: np.ndarray) -> np.ndarray:
    """Re ζ(1/2 + it) = Z(|t|)·cos θ(|t|)."""
    at = np.abs(t)
    return np.asarray(hardy_z(at)) * np.cos(theta(at))


def cauchy_walk_probe(n: int, seed: int = 0, b: float = 2.5, t_tope: Optional[float] = None,
                      modo: str = "caminata") -> ResultadoCauchy:
    """
    Σₖ Re ζ(1/2 + itₖ) con tₖ de Cauchy estándar (tan(π(u − 1/2))).

    modo "caminata": tₖ = X₁ + … + Xₖ; modo "independiente": tₖ = Xₖ.
    Los pasos que llevan |tₖ| por encima de `t_tope` se rechazan y se
    vuelven a sortear; la tasa de rechazo se reporta. La desviación es
    |suma − n| / (√n · max(log n, 1)^b).
    """
    if n < 0:
        raise ValueError("n no puede ser negativo")
    if modo not in ("caminata", "independiente"):
        raise ValueError(f"Modo desconocido: {modo}")
    if n == 0:
        return ResultadoCauchy(0.0, 0.0, 0.0)
    t_tope = params_ejecucion.T_MAX if t_tope is None else t_tope
    rng = np.random.default_rng(seed)
    alturas = np.empty(n)
    posicion = 0.0
    sorteos = 0
    for k in range(n):
        while True:
            paso = math.tan(math.pi * (rng.random() - 0.5))
            sorteos += 1
            candidato = posicion + paso if modo == "caminata" else paso
            if abs(candidato) <= t_tope:
                break
        posicion = candidato
        alturas[k] = candidato
    valores = _parte_real_zeta(alturas)
    suma = float(math.fsum(valores.tolist()))
    desviacion = abs(suma - n) / (math.sqrt(n) * max(math.log(n), 1.0) ** b)
    tasa = (sorteos - n) / sorteos
    logger.info(f"Sonda de Cauchy n={n} semilla={seed} modo={modo}: suma={suma:.6f}, rechazo={tasa:.4f}")
    return ResultadoCauchy(suma, desviacion, tasa)

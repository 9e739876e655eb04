"""
Motor de Primos
===============

Criba de Eratóstenes segmentada (sólo impares), flujo de huecos entre
primos consecutivos, récords de huecos máximos, estadístico de Cramér y
rachas de compuestos forzadas por factoriales y primoriales.

Versión: 1.0
"""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from scipy.special import expi

from .configuracion import ErrorVersionCache, params_primos
from . import salidas

logger = logging.getLogger(__name__)

EULER_GAMMA = float(np.euler_gamma)
# Referencias del estadístico de Cramér: 1 y 2e^{-γ}
REFERENCIAS_CRAMER = (1.0, 2.0 * math.exp(-EULER_GAMMA))


# ==========================================
# 1. TIPOS DE DOMINIO
# ==========================================
@dataclass(frozen=True)
class PrimeGapRecord:
    """Hueco récord: p es el primo inicial, x_at la cota en la que pasa a ser máximo."""

    p: int
    gap: int
    x_at: int

    @property
    def cramer(self) -> float:
        return self.gap / math.log(self.p) ** 2 if self.p > 1 else float('nan')


@dataclass(frozen=True)
class GapSummary:
    x: int
    pi_x: int
    avg_gap: float
    max_record: PrimeGapRecord
    cramer_stat: float
    referencias_cramer: Tuple[float, float] = REFERENCIAS_CRAMER

    def como_dict(self) -> Dict:
        return {
            'x': self.x,
            'pi_x': self.pi_x,
            'avg_gap': self.avg_gap,
            'max_gap_p': self.max_record.p,
            'max_gap': self.max_record.gap,
            'cramer_stat': self.cramer_stat,
            'referencias_cramer': list(self.referencias_cramer),
        }


# ==========================================
# 2. CRIBA SEGMENTADA
# ==========================================
def _criba_simple(limite: int) -> np.ndarray:
    if limite < 2:
        return np.array([], dtype=np.int64)
    es_primo = np.ones(limite + 1, dtype=bool)
    es_primo[:2] = False
    for p in range(2, math.isqrt(limite) + 1):
        if es_primo[p]:
            es_primo[p * p::p] = False
    return np.flatnonzero(es_primo).astype(np.int64)


def _validar_rango(lo: int, hi: int) -> None:
    if lo < 0 or hi < lo:
        raise ValueError(f"Rango inválido: 0 ≤ lo ({lo}) ≤ hi ({hi}) es requerido")
    if hi > params_primos.TECHO_CRIBA:
        raise ValueError(f"hi ({hi}) supera el techo de la criba {params_primos.TECHO_CRIBA}")


def _criba_ventana(bajo: int, alto: int, base: np.ndarray) -> np.ndarray:
    """Primos impares en [bajo, alto) con bajo impar ≥ 3."""
    casillas = (alto - bajo + 1) // 2
    if casillas <= 0:
        return np.array([], dtype=np.int64)
    marca = np.ones(casillas, dtype=bool)
    for p in base[1:]:
        p = int(p)
        p2 = p * p
        if p2 >= alto:
            break
        inicio = max(p2, ((bajo + p - 1) // p) * p)
        if inicio % 2 == 0:
            inicio += p
        if inicio >= alto:
            continue
        marca[(inicio - bajo) // 2::p] = False
    return bajo + 2 * np.flatnonzero(marca).astype(np.int64)


def _ventanas(lo: int, hi: int) -> List[Tuple[int, int]]:
    bajo = max(3, lo)
    if bajo % 2 == 0:
        bajo += 1
    ancho = 2 * params_primos.TAMANO_SEGMENTO
    ventanas = []
    while bajo <= hi:
        alto = min(bajo + ancho, hi + 1)
        ventanas.append((bajo, alto))
        bajo = alto if alto % 2 == 1 else alto + 1
    return ventanas


def _bloques_primos(lo: int, hi: int, hilos: int = 1) -> Iterator[np.ndarray]:
    """Primos de [lo, hi] por segmentos, en orden; memoria acotada por `hilos` segmentos."""
    _validar_rango(lo, hi)
    if lo <= 2 <= hi:
        yield np.array([2], dtype=np.int64)
    base = _criba_simple(math.isqrt(hi) + 1)
    ventanas = _ventanas(lo, hi)
    if hilos <= 1:
        for bajo, alto in ventanas:
            yield _criba_ventana(bajo, alto, base)
        return
    with ThreadPoolExecutor(max_workers=hilos) as ejecutor:
        for i in range(0, len(ventanas), hilos):
            grupo = ventanas[i:i + hilos]
            yield from ejecutor.map(lambda v: _criba_ventana(v[0], v[1], base), grupo)


def sieve_segment(lo: int, hi: int, hilos: int = 1) -> np.ndarray:
    """Primos en [lo, hi], ascendentes (int64)."""
    bloques = list(_bloques_primos(lo, hi, hilos))
    if not bloques:
        return np.array([], dtype=np.int64)
    return np.concatenate(bloques)


def prime_pi(x: int, hilos: int = 1) -> int:
    """π(x) contando por segmentos."""
    if x < 2:
        return 0
    return int(sum(len(b) for b in _bloques_primos(2, x, hilos)))


def nth_primes(n: int) -> np.ndarray:
    """Los primeros n primos."""
    if n < 1:
        return np.array([], dtype=np.int64)
    if n < 6:
        limite = 15
    else:
        limite = int(n * (math.log(n) + math.log(math.log(n)))) + 1
    primos = sieve_segment(2, limite)
    return primos[:n]


def li(x: float) -> float:
    """Logaritmo integral li(x) = Ei(log x) (valor principal)."""
    if x <= 1:
        raise ValueError(f"li requiere x > 1 (x = {x})")
    return float(expi(math.log(x)))


# ==========================================
# 3. FLUJO DE HUECOS
# ==========================================
def _bloques_huecos(x_max: int, hilos: int = 1) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Pares (pₙ, dₙ) por bloques; el último primo de cada segmento se arrastra al siguiente."""
    arrastre = None
    for primos in _bloques_primos(2, x_max, hilos):
        if arrastre is not None:
            primos = np.concatenate([[arrastre], primos])
        if len(primos) == 0:
            continue
        if len(primos) >= 2:
            yield primos[:-1], np.diff(primos)
        arrastre = primos[-1]


def gap_stream(x_max: int, hilos: int = 1) -> Iterator[Tuple[int, int]]:
    """
    Genera (pₙ, dₙ) para cada par de primos consecutivos con pₙ₊₁ ≤ x_max.

    La memoria queda acotada por el tamaño de segmento, no por x_max.
    """
    if x_max < 3:
        raise ValueError(f"gap_stream requiere x_max ≥ 3 (x_max = {x_max})")
    for p, d in _bloques_huecos(x_max, hilos):
        yield from zip(p.tolist(), d.tolist())


def _acumular_records(p: np.ndarray, d: np.ndarray, maximo: int,
                      records: List[PrimeGapRecord]) -> int:
    previo = np.maximum.accumulate(np.concatenate([[maximo], d]))[:-1]
    for i in np.flatnonzero(d > previo):
        records.append(PrimeGapRecord(int(p[i]), int(d[i]), int(p[i] + d[i])))
    return max(maximo, int(d.max()))


def gap_records(x: int, hilos: int = 1) -> List[PrimeGapRecord]:
    """Récords de hueco máximo (estrictamente crecientes) con pₙ₊₁ ≤ x."""
    records: List[PrimeGapRecord] = []
    maximo = 0
    for p, d in _bloques_huecos(x, hilos):
        maximo = _acumular_records(p, d, maximo, records)
    return records


def gap_summary(x: int, hilos: int = 1) -> GapSummary:
    """
    Resumen en una pasada: π(x), hueco medio x/π(x), récord máximo y
    estadístico de Cramér dₙ/log²pₙ evaluado en ese récord.
    """
    if x < 10:
        raise ValueError(f"gap_summary requiere x ≥ 10 (x = {x})")
    pi_x = 1
    records: List[PrimeGapRecord] = []
    mayor = 0
    for p, d in _bloques_huecos(x, hilos):
        pi_x += len(d)
        mayor = _acumular_records(p, d, mayor, records)
    maximo = records[-1]
    resumen = GapSummary(
        x=x,
        pi_x=pi_x,
        avg_gap=x / pi_x,
        max_record=maximo,
        cramer_stat=maximo.cramer,
    )
    logger.info(f"Resumen de huecos x={x}: π(x)={pi_x}, récord={maximo.gap} en p={maximo.p}")
    return resumen


# ==========================================
# 4. FORMAS ASINTÓTICAS Y AJUSTES
# ==========================================
def _log_iterado(x: float, veces: int) -> Optional[float]:
    valor = float(x)
    for _ in range(veces):
        if valor <= 0:
            return None
        valor = math.log(valor)
    return valor


def forma_rankin(x: float) -> Optional[float]:
    """log x · log₂x · log₄x / (log₃x)²; None donde no está definida o es ≤ 0."""
    l1, l2, l3, l4 = (_log_iterado(x, k) for k in (1, 2, 3, 4))
    if l4 is None or l4 <= 0 or l3 is None or l3 <= 0:
        return None
    return l1 * l2 * l4 / (l3 * l3)


def forma_westzynthius(x: float) -> Optional[float]:
    """log x · log₃x / log₄x; None donde no está definida o es ≤ 0."""
    l1, l3, l4 = (_log_iterado(x, k) for k in (1, 3, 4))
    if l4 is None or l4 <= 0 or l3 is None or l3 <= 0:
        return None
    return l1 * l3 / l4


def _ajuste_constante(y: np.ndarray, forma: np.ndarray) -> Optional[float]:
    """Mínimos cuadrados de y ≈ c·forma sin ordenada al origen."""
    if len(y) == 0:
        return None
    return float(np.dot(forma, y) / np.dot(forma, forma))


def gap_record_report(x: int, hilos: int = 1) -> Dict:
    """
    Récords frente a las formas de huecos grandes (constantes ajustadas,
    sin aprobar ni reprobar) y la sucesión creciente de dₙ/log pₙ.
    """
    records = gap_records(x, hilos)
    tabla = []
    for r in records:
        tabla.append({
            'p': r.p, 'gap': r.gap, 'x_at': r.x_at,
            'gap_sobre_log': r.gap / math.log(r.p) if r.p > 1 else None,
            'cramer': r.cramer if r.p > 1 else None,
            'forma_rankin': forma_rankin(r.p),
            'forma_westzynthius': forma_westzynthius(r.p),
        })
    definidos = [f for f in tabla if f['forma_rankin'] is not None]
    c_rankin = _ajuste_constante(np.array([f['gap'] for f in definidos], dtype=float),
                                 np.array([f['forma_rankin'] for f in definidos], dtype=float))
    definidos = [f for f in tabla if f['forma_westzynthius'] is not None]
    c_west = _ajuste_constante(np.array([f['gap'] for f in definidos], dtype=float),
                               np.array([f['forma_westzynthius'] for f in definidos], dtype=float))
    cocientes = [f['gap_sobre_log'] for f in tabla if f['gap_sobre_log'] is not None and f['p'] >= 3]
    return {
        'x': x,
        'records': tabla,
        'c_rankin_ajustada': c_rankin,
        'c_westzynthius_ajustada': c_west,
        'gap_sobre_log_creciente': bool(np.all(np.diff(cocientes) > 0)) if len(cocientes) > 1 else None,
        'gap_sobre_log_maximo': max(cocientes) if cocientes else None,
    }


def small_gap_report(x: int, hilos: int = 1) -> List[Dict]:
    """Mínimos por década de dₙ/√(log pₙ (log log pₙ)²), pₙ ≥ 3."""
    minimos: Dict[int, Tuple[float, int]] = {}
    for p, d in _bloques_huecos(x, hilos):
        sel = p >= 3
        p, d = p[sel], d[sel]
        if len(p) == 0:
            continue
        lp = np.log(p.astype(float))
        cociente = d / np.sqrt(lp * np.log(lp) ** 2)
        decada = np.floor(np.log10(p)).astype(int)
        for k in np.unique(decada):
            en = decada == k
            i = int(np.argmin(np.where(en, cociente, np.inf)))
            actual = minimos.get(int(k))
            if actual is None or cociente[i] < actual[0]:
                minimos[int(k)] = (float(cociente[i]), int(p[i]))
    return [{'decada': k, 'minimo': v, 'p': p} for k, (v, p) in sorted(minimos.items())]


def prime_count_report(x: int, hilos: int = 1) -> Dict:
    """π(x) frente a li(x) y x/log x."""
    pi_x = prime_pi(x, hilos)
    li_x = li(x)
    return {
        'x': x,
        'pi_x': pi_x,
        'li_x': li_x,
        'li_menos_pi': li_x - pi_x,
        'cociente_li': pi_x / li_x,
        'x_sobre_log': x / math.log(x),
    }


def nth_prime_bounds(primos: np.ndarray) -> Dict:
    """a, b ajustados con a·n log n ≤ pₙ ≤ b·n log n (n ≥ 2) y n log n / pₙ por década."""
    primos = np.asarray(primos, dtype=float)
    if len(primos) < 2:
        raise ValueError("Se requieren al menos dos primos")
    n = np.arange(2, len(primos) + 1, dtype=float)
    nlogn = n * np.log(n)
    cociente = primos[1:] / nlogn
    decada = np.floor(np.log10(n)).astype(int)
    por_decada = [
        {'decada': int(k), 'n_log_n_sobre_p': float(np.mean(1.0 / cociente[decada == k]))}
        for k in np.unique(decada)
    ]
    return {'a': float(cociente.min()), 'b': float(cociente.max()), 'por_decada': por_decada}


# ==========================================
# 5. RACHAS DE COMPUESTOS
# ==========================================
def divisores_forzados(inicio: int, longitud: int, modulo: int) -> List[int]:
    """
    Para cada k en [2, longitud+1] devuelve el menor primo de k, que divide
    a modulo + k; lanza RuntimeError si alguno no es divisor propio.
    """
    divisores = []
    for k in range(2, longitud + 2):
        d = next(p for p in range(2, k + 1) if k % p == 0)
        valor = inicio + k - 2
        if valor != modulo + k or valor % d != 0 or valor == d:
            raise RuntimeError(f"{valor} no tiene divisor forzado {d}")
        divisores.append(d)
    return divisores


def composite_run_factorial(n: int) -> Tuple[int, int]:
    """(n!+2, n−1): n!+k es divisible por k para 2 ≤ k ≤ n."""
    if n < 2 or n > params_primos.FACTORIAL_MAXIMO:
        raise ValueError(f"n debe estar entre 2 y {params_primos.FACTORIAL_MAXIMO} (n = {n})")
    f = math.factorial(n)
    inicio, longitud = f + 2, n - 1
    divisores_forzados(inicio, longitud, f)
    return inicio, longitud


def primorial(n: int) -> int:
    return math.prod(int(p) for p in nth_primes(n))


def composite_run_primorial(n: int) -> Tuple[int, int]:
    """(pₙ#+2, pₙ−1): todo k ≤ pₙ comparte un primo ≤ pₙ con pₙ#."""
    if n < 1 or n > params_primos.PRIMORIAL_MAXIMO:
        raise ValueError(f"n debe estar entre 1 y {params_primos.PRIMORIAL_MAXIMO} (n = {n})")
    pn = int(nth_primes(n)[-1])
    m = primorial(n)
    inicio, longitud = m + 2, pn - 1
    divisores_forzados(inicio, longitud, m)
    return inicio, longitud


def composite_run_report(n_max: int = 12) -> List[Dict]:
    """Longitud de racha frente a log x / log log x (factorial) y log x (primorial)."""
    filas = []
    for n in range(2, min(n_max, params_primos.FACTORIAL_MAXIMO) + 1):
        inicio, longitud = composite_run_factorial(n)
        lx = math.log(inicio)
        filas.append({'tipo': 'factorial', 'n': n, 'inicio': inicio, 'longitud': longitud,
                      'referencia': lx / math.log(lx), 'cociente': longitud / (lx / math.log(lx))})
    for n in range(1, min(n_max, params_primos.PRIMORIAL_MAXIMO) + 1):
        inicio, longitud = composite_run_primorial(n)
        lx = math.log(inicio)
        filas.append({'tipo': 'primorial', 'n': n, 'inicio': inicio, 'longitud': longitud,
                      'referencia': lx, 'cociente': longitud / lx})
    return filas


# ==========================================
# 6. CACHÉ DE PRIMOS
# ==========================================
class CachePrimos:
    """Marca de cobertura `primecache v1 x_max=<x>`; la criba se rehace a demanda."""

    NOMBRE = "primes.primecache"

    def __init__(self, directorio: str):
        self.ruta = os.path.join(directorio, self.NOMBRE)

    def existe(self) -> bool:
        return os.path.exists(self.ruta)

    def leer(self) -> int:
        with open(self.ruta, encoding='utf-8') as f:
            linea = f.readline().strip()
        prefijo = f"primecache {params_primos.VERSION_CACHE} x_max="
        if not linea.startswith(prefijo):
            raise ErrorVersionCache(f"Versión de caché incompatible en {self.ruta}: {linea}")
        return int(linea[len(prefijo):])

    def registrar(self, x_max: int) -> None:
        if self.existe() and self.leer() >= x_max:
            return
        salidas.escribir_atomico(self.ruta, f"primecache {params_primos.VERSION_CACHE} x_max={x_max}\n")
        logger.info(f"Caché de primos registrada hasta x={x_max}")

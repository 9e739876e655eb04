"""
Sonda de Dualidad Primo–Cero
============================

Empareja el n-ésimo primo con el n-ésimo cero y mide el cociente
pₙ/(γₙ log²n) frente a 1/(2π), las transferencias de cotas de huecos en
ambos sentidos y los extremos de espaciamiento a lo largo de la altura.

Las relaciones son asintóticas: todo se reporta como (cota, real,
cociente) y fracciones de violación por década, nunca como aserción.

Versión: 1.0
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .spacing_stats import SpacingSample, _forma_grande, _forma_pequena
from .zeta_engine import ZetaZero

logger = logging.getLogger(__name__)

DOS_PI = 2.0 * math.pi
REFERENCIA_DUALIDAD = 1.0 / DOS_PI
COLUMNAS_BARRIDO = ['n', 'k', 'p_gap', 'z_gap', 'bound_pz', 'bound_zp', 'violation_pz', 'violation_zp']


@dataclass
class DualityReport:
    n: int
    p_n: int
    gamma_n: float
    ratio: float
    reference: float
    primo_asintotico: float
    cero_asintotico: float
    transfer_bounds: Dict[str, float] = field(default_factory=dict)


def cota_primo_a_cero(p_gap: float, n: int) -> float:
    """4π(pₙ₊ₖ − pₙ)/log²n."""
    return 4.0 * math.pi * p_gap / math.log(n) ** 2


def cota_cero_a_primo(z_gap: float, n: int) -> float:
    """(γₙ₊ₖ − γₙ)·log²n/π."""
    return z_gap * math.log(n) ** 2 / math.pi


class SondaDualidad:
    """
    Sucesiones alineadas por índice: primos[n−1] = pₙ y gammas[n−1] = γₙ.
    """

    def __init__(self, primos: Sequence[int], ceros: Sequence):
        self.primos = np.asarray(primos, dtype=np.int64)
        if len(ceros) and isinstance(ceros[0], ZetaZero):
            if ceros[0].index != 1:
                raise ValueError("La lista de ceros debe empezar en γ₁")
            self.gammas = np.array([z.gamma for z in ceros], dtype=float)
        else:
            self.gammas = np.asarray(ceros, dtype=float)
        self.n_max = int(min(len(self.primos), len(self.gammas)))

    def _validar(self, n: int, k: int = 0) -> None:
        if n < 2:
            raise ValueError(f"n debe ser ≥ 2 (n = {n})")
        if n + k > self.n_max:
            raise ValueError(
                f"Índice {n + k} fuera de los datos calculados "
                f"({len(self.primos)} primos, {len(self.gammas)} ceros)"
            )

    def _validar_k(self, n: int, k: int) -> None:
        if k < 0:
            raise ValueError("k no puede ser negativo")
        if k > n / 10:
            raise ValueError(f"k = {k} excede n/10 = {n / 10}")

    def p(self, n: int) -> int:
        return int(self.primos[n - 1])

    def gamma(self, n: int) -> float:
        return float(self.gammas[n - 1])

    # ------------------------------------------
    # Cociente de dualidad
    # ------------------------------------------
    def duality_ratio(self, n: int) -> DualityReport:
        """pₙ/(γₙ log²n) frente a 1/(2π), con las dos entradas asintóticas."""
        self._validar(n)
        p_n, g_n = self.p(n), self.gamma(n)
        ln = math.log(n)
        cotas = {
            'p_sobre_prediccion': p_n * DOS_PI / (g_n * ln * ln),
            'gamma_sobre_prediccion': g_n * ln * ln / (DOS_PI * p_n),
        }
        if n + 1 <= self.n_max:
            p_gap = self.p(n + 1) - p_n
            z_gap = self.gamma(n + 1) - g_n
            cotas.update({
                'p_gap': float(p_gap),
                'z_gap': z_gap,
                'bound_zp': cota_cero_a_primo(z_gap, n),
                'bound_pz': cota_primo_a_cero(p_gap, n),
            })
        return DualityReport(
            n=n, p_n=p_n, gamma_n=g_n,
            ratio=p_n / (g_n * ln * ln),
            reference=REFERENCIA_DUALIDAD,
            primo_asintotico=n * ln / p_n,
            cero_asintotico=g_n * ln / (DOS_PI * n),
            transfer_bounds=cotas,
        )

    # ------------------------------------------
    # Transferencia de cotas de huecos
    # ------------------------------------------
    def gap_transfer_prime_to_zero(self, n: int, k: int) -> Tuple[float, float]:
        """(4π(pₙ₊ₖ − pₙ)/log²n, γₙ₊ₖ − γₙ)."""
        self._validar_k(n, k)
        if k == 0:
            return 0.0, 0.0
        self._validar(n, k)
        return cota_primo_a_cero(self.p(n + k) - self.p(n), n), self.gamma(n + k) - self.gamma(n)

    def gap_transfer_zero_to_prime(self, n: int, k: int) -> Tuple[float, float]:
        """((γₙ₊ₖ − γₙ)·log²n/π, pₙ₊ₖ − pₙ)."""
        self._validar_k(n, k)
        if k == 0:
            return 0.0, 0.0
        self._validar(n, k)
        return cota_cero_a_primo(self.gamma(n + k) - self.gamma(n), n), float(self.p(n + k) - self.p(n))

    def barrido(self, n_lo: int, n_hi: int, k: int = 1) -> pd.DataFrame:
        """Barrido vectorizado n ∈ [n_lo, n_hi] con las columnas del CSV de dualidad."""
        n_lo = max(n_lo, 2, 10 * k)
        n_hi = min(n_hi, self.n_max - k)
        if n_hi < n_lo:
            return pd.DataFrame(columns=COLUMNAS_BARRIDO)
        n = np.arange(n_lo, n_hi + 1)
        ln2 = np.log(n) ** 2
        p_gap = self.primos[n - 1 + k] - self.primos[n - 1]
        z_gap = self.gammas[n - 1 + k] - self.gammas[n - 1]
        bound_pz = 4.0 * math.pi * p_gap / ln2
        bound_zp = z_gap * ln2 / math.pi
        return pd.DataFrame({
            'n': n,
            'k': k,
            'p_gap': p_gap,
            'z_gap': z_gap,
            'bound_pz': bound_pz,
            'bound_zp': bound_zp,
            'violation_pz': (z_gap > bound_pz).astype(int),
            'violation_zp': (p_gap > bound_zp).astype(int),
        })

    @staticmethod
    def fracciones_por_decada(barrido: pd.DataFrame) -> List[Dict]:
        if barrido.empty:
            return []
        decada = np.floor(np.log10(barrido['n'].to_numpy())).astype(int)
        agrupado = barrido.assign(decada=decada).groupby('decada')
        return [
            {'decada': int(d), 'muestras': int(len(g)),
             'fraccion_pz': float(g['violation_pz'].mean()),
             'fraccion_zp': float(g['violation_zp'].mean())}
            for d, g in agrupado
        ]

    def cocientes_por_decada(self, n_lo: int, n_hi: int) -> List[Dict]:
        """Media de n log n/pₙ y γₙ log n/(2πn) por década de n."""
        n = np.arange(max(2, n_lo), min(n_hi, self.n_max) + 1)
        if len(n) == 0:
            return []
        ln = np.log(n)
        primo = n * ln / self.primos[n - 1]
        cero = self.gammas[n - 1] * ln / (DOS_PI * n)
        ratio = self.primos[n - 1] / (self.gammas[n - 1] * ln ** 2)
        decada = np.floor(np.log10(n)).astype(int)
        return [
            {'decada': int(d),
             'primo_asintotico': float(primo[decada == d].mean()),
             'cero_asintotico': float(cero[decada == d].mean()),
             'ratio': float(ratio[decada == d].mean())}
            for d in np.unique(decada)
        ]

    # ------------------------------------------
    # Derivados
    # ------------------------------------------
    def gap_constant_probe(self, n_max: Optional[int] = None) -> Dict:
        """
        c ajustada en pₙ₊₁ − pₙ ≤ c·log²pₙ y la cota que resulta de sustituir
        γₙ₊₁ − γₙ ≤ π/log log γₙ en la transferencia cero→primo.
        """
        n_max = min(self.n_max - 1, n_max or self.n_max)
        n = np.arange(2, n_max + 1)
        p = self.primos[n - 1].astype(float)
        p_gap = self.primos[n] - self.primos[n - 1]
        c = p_gap / np.log(p) ** 2
        sustituida = np.log(n) ** 2 / np.log(np.log(self.gammas[n - 1]))
        return {
            'n_max': int(n_max),
            'c_ajustada': float(c.max()),
            'n_c_maximo': int(n[int(np.argmax(c))]),
            'violaciones_cota_sustituida': int(np.count_nonzero(p_gap > sustituida)),
            'hueco_minimo': int(p_gap.min()),
        }

    def k_step_dictionary(self, n: int, v: int) -> Dict:
        """Sumas de v huecos consecutivos en ambos dominios y su cociente a la predicción."""
        self._validar(n, v)
        p_sum = self.p(n + v) - self.p(n)
        z_sum = self.gamma(n + v) - self.gamma(n)
        prediccion = z_sum * math.log(n) ** 2 / DOS_PI
        return {'n': n, 'v': v, 'p_sum': int(p_sum), 'z_sum': z_sum,
                'prediccion_p': prediccion, 'cociente': p_sum / prediccion}


# ==========================================
# EXTREMOS A LO LARGO DE LA ALTURA
# ==========================================
def _decadas_con_avance(n: np.ndarray, valores: np.ndarray, minimo: bool) -> int:
    """Cuántas décadas de n mejoran el extremo acumulado de las anteriores."""
    decada = np.floor(np.log10(n)).astype(int)
    avances = 0
    previo = None
    for d in np.unique(decada):
        hasta = valores[decada <= d]
        actual = hasta.min() if minimo else hasta.max()
        if previo is not None and (actual < previo if minimo else actual > previo):
            avances += 1
        previo = actual
    return avances


def extreme_spacing_probe(samples: Sequence[SpacingSample], gaps: Sequence[Tuple[int, int]]) -> Dict:
    """
    En los índices que realizan extremos corrientes de delta evalúa las
    envolventes de espaciamiento pequeño y grande, y del lado de los
    primos log p·log log p y √(log p·(log log p)²). Reporta si los
    extremos se profundizan con la altura.
    """
    n_cero = np.array([s.n for s in samples], dtype=np.int64)
    solapados = min(len(samples), len(gaps))
    if solapados == 0:
        return {}
    n = n_cero[:solapados]
    g = np.array([s.gamma_n for s in samples[:solapados]], dtype=float)
    delta = np.array([s.delta for s in samples[:solapados]], dtype=float)
    p = np.array([gp[0] for gp in gaps[:solapados]], dtype=float)
    d = np.array([gp[1] for gp in gaps[:solapados]], dtype=float)

    def filas(posiciones: np.ndarray) -> List[Dict]:
        salida = []
        for i in posiciones:
            lp = math.log(p[i]) if p[i] > 1 else float('nan')
            llp = math.log(lp) if lp > 0 else float('nan')
            grande = float(_forma_grande(g[i:i + 1])[0])
            salida.append({
                'n': int(n[i]), 'gamma_n': float(g[i]), 'delta': float(delta[i]),
                'forma_pequena': float(_forma_pequena(g[i:i + 1])[0]),
                'forma_grande': None if math.isnan(grande) else grande,
                'p_n': int(p[i]), 'd_n': int(d[i]),
                'forma_huecos_grandes': lp * llp if llp > 0 else None,
                'forma_huecos_pequenos': math.sqrt(lp * llp * llp) if llp == llp else None,
            })
        return salida

    acum_min = np.minimum.accumulate(delta)
    acum_max = np.maximum.accumulate(delta)
    pos_min = np.flatnonzero(np.concatenate([[True], acum_min[1:] < acum_min[:-1]]))
    pos_max = np.flatnonzero(np.concatenate([[True], acum_max[1:] > acum_max[:-1]]))
    return {
        'indices_solapados': int(solapados),
        'minimos_corrientes': filas(pos_min),
        'maximos_corrientes': filas(pos_max),
        'decadas_descenso_minimo': _decadas_con_avance(n, delta, minimo=True),
        'decadas_ascenso_maximo': _decadas_con_avance(n, delta, minimo=False),
    }

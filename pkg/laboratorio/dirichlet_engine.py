"""
Motor de Dirichlet
==================

Caracteres módulo q construidos desde la estructura del grupo (Z/qZ)*,
sumas de Gauss, L(s, χ) por suma de caracteres con cola de
Euler–Maclaurin, ceros de L en la línea crítica y estadísticas de primos
en progresiones aritméticas.

Versión: 1.0
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.special import loggamma

from .configuracion import params_dirichlet, params_primos, params_zeta
from .duality_probe import COLUMNAS_BARRIDO, SondaDualidad
from .prime_engine import _bloques_primos, forma_rankin, li
from .zeta_engine import ZetaZero, _cola_euler_maclaurin, _signo, refinar_diadico

logger = logging.getLogger(__name__)

DOS_PI = 2.0 * math.pi
EULER_GAMMA = float(np.euler_gamma)


# ==========================================
# 1. ESTRUCTURA DEL GRUPO (Z/qZ)*
# ==========================================
def factorizar(n: int) -> List[Tuple[int, int]]:
    """Factorización por división de prueba: [(p, e), ...] ascendente."""
    factores = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            factores.append((d, e))
        d += 1
    if n > 1:
        factores.append((n, 1))
    return factores


def euler_phi(n: int) -> int:
    resultado = n
    for p, _ in factorizar(n):
        resultado = resultado // p * (p - 1)
    return resultado


def _orden_multiplicativo(g: int, m: int) -> int:
    k, x = 1, g % m
    while x != 1:
        x = x * g % m
        k += 1
    return k


def _raiz_primitiva(m: int) -> int:
    phi = euler_phi(m)
    return next(g for g in range(2, m) if math.gcd(g, m) == 1 and _orden_multiplicativo(g, m) == phi)


@dataclass(frozen=True)
class _Componente:
    """Factor cíclico de (Z/p^eZ)*: generador, orden y logaritmo discreto."""

    modulo: int
    generador: int
    orden: int
    logaritmos: Dict[int, int]
    signo_menos_uno: bool = False


def _componentes(q: int) -> List[_Componente]:
    componentes = []
    for p, e in factorizar(q):
        m = p ** e
        if p == 2:
            if e == 1:
                continue
            # componente de −1: r ≡ 1 mod 4 → 0, r ≡ 3 mod 4 → 1
            componentes.append(_Componente(m, m - 1, 2, {}, signo_menos_uno=True))
            if e >= 3:
                orden = 2 ** (e - 2)
                logs = {pow(5, k, m): k for k in range(orden)}
                componentes.append(_Componente(m, 5, orden, logs))
        else:
            g = _raiz_primitiva(m)
            orden = euler_phi(m)
            logs = {pow(g, k, m): k for k in range(orden)}
            componentes.append(_Componente(m, g, orden, logs))
    return componentes


def _exponentes(r: int, componentes: List[_Componente]) -> List[int]:
    vector = []
    for c in componentes:
        x = r % c.modulo
        if c.signo_menos_uno:
            vector.append(0 if x % 4 == 1 else 1)
        elif c.modulo % 2 == 0:
            # parte 5^k de ±x en (Z/2^eZ)*
            vector.append(c.logaritmos[x if x % 4 == 1 else (-x) % c.modulo])
        else:
            vector.append(c.logaritmos[x])
    return vector


# ==========================================
# 2. CARACTERES
# ==========================================
@dataclass(eq=False)
class DirichletCharacter:
    """
    Carácter χ mod q. `logs[r]` es el exponente L con χ(r) = e^{2πiL/exponente}
    (−1 si gcd(r, q) > 1); `values` guarda los valores complejos.
    """

    q: int
    indice: int
    exponente: int
    logs: np.ndarray
    values: np.ndarray = field(repr=False)
    conductor: int = 1
    order: int = 1

    @property
    def parity(self) -> int:
        """κ: 0 si χ(−1) = 1 (par), 1 si χ(−1) = −1 (impar)."""
        return 0 if self.logs[self.q - 1] == 0 else 1

    @property
    def even(self) -> bool:
        return self.parity == 0

    @property
    def primitive(self) -> bool:
        return self.conductor == self.q

    @property
    def principal(self) -> bool:
        return self.order == 1

    @property
    def real(self) -> bool:
        return self.order <= 2

    def __call__(self, n: int) -> complex:
        return complex(self.values[n % self.q])


def _conductor(q: int, logs: np.ndarray) -> int:
    """Menor f | q tal que χ es trivial sobre los r ≡ 1 (mod f) coprimos con q."""
    r = np.arange(q)
    for f in sorted(d for d in range(1, q + 1) if q % d == 0):
        sel = (logs >= 0) & (r % f == 1 % f)
        if np.all(logs[sel] == 0):
            return f
    return q


@lru_cache(maxsize=None)
def characters(q: int) -> Tuple[DirichletCharacter, ...]:
    """Los φ(q) caracteres módulo q; el índice 0 es el principal."""
    if q < 3:
        raise ValueError(f"Se requiere q ≥ 3 (q = {q})")
    if q > params_dirichlet.MODULO_MAXIMO_CARACTERES:
        raise ValueError(f"q = {q} supera el máximo {params_dirichlet.MODULO_MAXIMO_CARACTERES}")
    componentes = _componentes(q)
    ordenes = [c.orden for c in componentes]
    exponente = math.lcm(*ordenes) if ordenes else 1
    coprimos = [r for r in range(q) if math.gcd(r, q) == 1]
    tabla = {r: _exponentes(r, componentes) for r in coprimos}

    caracteres = []
    for indice, j in enumerate(itertools.product(*[range(s) for s in ordenes])):
        logs = np.full(q, -1, dtype=np.int64)
        for r in coprimos:
            logs[r] = sum(ji * ki * (exponente // s) for ji, ki, s in zip(j, tabla[r], ordenes)) % exponente
        valores = np.where(logs >= 0, np.exp(2j * math.pi * np.maximum(logs, 0) / exponente), 0.0)
        orden = exponente // math.gcd(exponente, *[int(x) for x in logs[coprimos]])
        caracteres.append(DirichletCharacter(q, indice, exponente, logs, valores,
                                             _conductor(q, logs), orden))
    logger.debug(f"Caracteres módulo {q}: {len(caracteres)}")
    return tuple(caracteres)


def order(chi: DirichletCharacter) -> int:
    return chi.order


def conductor(chi: DirichletCharacter) -> int:
    return chi.conductor


def gauss_sum(chi: DirichletCharacter) -> complex:
    """τ(χ) = Σₐ χ(a) e^{2πia/q}."""
    a = np.arange(chi.q)
    return complex(np.sum(chi.values * np.exp(2j * math.pi * a / chi.q)))


def root_number(chi: DirichletCharacter) -> complex:
    """
    ε(χ) = τ(χ)/(i^κ √q). Lanza RuntimeError con diagnóstico si
    |τ(χ)| ≠ √q más allá de la tolerancia (χ no primitivo o tabla corrupta).
    """
    tau = gauss_sum(chi)
    raiz = math.sqrt(chi.q)
    if abs(abs(tau) - raiz) > params_dirichlet.TOLERANCIA_GAUSS * raiz:
        raise RuntimeError(
            f"Número raíz indefinido para χ mod {chi.q} (índice {chi.indice}): "
            f"|τ| = {abs(tau):.12g}, √q = {raiz:.12g}, conductor = {chi.conductor}"
        )
    return tau / ((1j ** chi.parity) * raiz)


# ==========================================
# 3. FUNCIONES L
# ==========================================
def _serie_l(s: np.ndarray, chi: DirichletCharacter) -> np.ndarray:
    """
    L(s, χ) = Σ_{n ≤ Mq} χ(n) n^{-s} + q^{-s} Σₐ χ(a) Σ_{m ≥ 0} (M + a/q + m)^{-s},
    con la cola por Euler–Maclaurin regularizada en s = 1 (Σ χ(a) = 0).
    """
    q = chi.q
    cortes = 20 + np.ceil(np.abs(s.imag)).astype(np.int64)
    suma = np.zeros(s.shape, dtype=complex)
    for n in range(1, int(cortes.max()) * q + 1):
        valor = chi.values[n % q]
        if valor == 0:
            continue
        termino = valor * np.exp(-s * math.log(n))
        suma = suma + np.where(n <= cortes * q, termino, 0.0)
    q_s = np.exp(-s * math.log(q))
    for a in range(1, q):
        if chi.values[a] == 0:
            continue
        x = cortes + a / q
        suma = suma + chi.values[a] * q_s * _cola_euler_maclaurin(
            s, x.astype(float), params_zeta.TERMINOS_BERNOULLI, regularizada=True)
    return suma


def l_eval(s: Union[complex, np.ndarray], chi: DirichletCharacter) -> Union[complex, np.ndarray]:
    """L(s, χ) para χ no principal, 0 < Re s ≤ 1.5, |Im s| ≤ ALTURA_MAXIMA_L."""
    if chi.principal:
        raise ValueError("El carácter principal no está soportado (se reduce a ζ con factores faltantes)")
    escalar = np.ndim(s) == 0
    arr = np.atleast_1d(np.asarray(s, dtype=complex))
    if np.any(arr.real <= 0) or np.any(arr.real > 1.5):
        raise ValueError("Se requiere 0 < Re(s) ≤ 1.5")
    if np.any(np.abs(arr.imag) > params_dirichlet.ALTURA_MAXIMA_L):
        raise ValueError(f"|Im(s)| supera {params_dirichlet.ALTURA_MAXIMA_L}")
    valores = _serie_l(arr, chi)
    return complex(valores[0]) if escalar else valores


def theta_chi(t: Union[float, np.ndarray], chi: DirichletCharacter) -> Union[float, np.ndarray]:
    """θ_χ(t) = Im log Γ((1/2 + κ + it)/2) + (t/2) log(q/π)."""
    t = np.asarray(t, dtype=float)
    return np.imag(loggamma((0.5 + chi.parity + 1j * t) / 2.0)) + 0.5 * t * math.log(chi.q / math.pi)


def hardy_z_chi(t: Union[float, np.ndarray], chi: DirichletCharacter) -> Union[float, np.ndarray]:
    """
    Z_χ(t) = Re[ε^{-1/2} e^{iθ_χ(t)} L(1/2 + it, χ)], real por la ecuación
    funcional de la función completada; sus ceros reales son los de L.
    """
    escalar = np.ndim(t) == 0
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    epsilon = root_number(chi)
    rotacion = np.exp(-0.5j * np.angle(epsilon))
    valores = l_eval(0.5 + 1j * arr, chi)
    z = np.real(rotacion * np.exp(1j * theta_chi(arr, chi)) * valores)
    return float(z[0]) if escalar else z


def count_l_zeros_main_term(T: float, q: int) -> float:
    """(T/2π) log(qT/2π) − T/2π."""
    if T <= 0:
        return 0.0
    return T / DOS_PI * math.log(q * T / DOS_PI) - T / DOS_PI


def _phi_malla(t: np.ndarray, q: int) -> np.ndarray:
    u = t + DOS_PI
    return (u * np.log(q * u / DOS_PI) - u - DOS_PI * math.log(q) + DOS_PI) / DOS_PI


def _malla_global(j: np.ndarray, q: int) -> np.ndarray:
    """Alturas t con Φ(t) = j/m; la malla no depende del rango pedido."""
    y = j / params_dirichlet.PUNTOS_POR_CERO
    t = DOS_PI * y / math.log(q)
    for _ in range(60):
        derivada = np.log(q * (t + DOS_PI) / DOS_PI) / DOS_PI
        t = t - (_phi_malla(t, q) - y) / derivada
    return np.maximum(t, 0.0)


def find_l_zeros(chi: DirichletCharacter, t_lo: float, t_hi: float, tol: float = None) -> List[ZetaZero]:
    """
    Ceros de L(s, χ) en la línea crítica con γ ∈ [t_lo, t_hi), índices desde
    el primer cero positivo. Los cambios de signo de Z_χ se buscan en una
    malla global; ante déficit frente al término principal se subdivide.
    """
    tol = params_zeta.TOLERANCIA if tol is None else tol
    if chi.principal or not chi.primitive:
        raise ValueError(f"Se requiere un carácter primitivo no principal (q = {chi.q}, índice {chi.indice})")
    if chi.q > params_dirichlet.MODULO_MAXIMO_CEROS:
        raise ValueError(f"q = {chi.q} supera el máximo para ceros {params_dirichlet.MODULO_MAXIMO_CEROS}")
    if t_lo < 0 or t_hi < t_lo:
        raise ValueError(f"Rango inválido: 0 ≤ t_lo ({t_lo}) ≤ t_hi ({t_hi}) es requerido")
    if t_hi > params_dirichlet.ALTURA_MAXIMA_L:
        raise ValueError(f"t_hi ({t_hi}) supera {params_dirichlet.ALTURA_MAXIMA_L}")
    if t_hi == t_lo:
        return []
    root_number(chi)

    def funcion(t):
        return hardy_z_chi(t, chi)

    j_fin = int(math.ceil(params_dirichlet.PUNTOS_POR_CERO * float(_phi_malla(np.array([t_hi]), chi.q)[0]))) + 1
    malla = _malla_global(np.arange(0, j_fin + 1, dtype=float), chi.q)
    valores = np.asarray(funcion(malla))
    esperado = count_l_zeros_main_term(t_hi, chi.q)
    for ronda in range(1, params_zeta.RONDAS_SUBDIVISION + 1):
        s = _signo(valores)
        encontrados = int(np.count_nonzero((s[:-1] != s[1:]) & (malla[1:] <= t_hi)))
        if encontrados >= esperado - 2:
            break
        logger.info(f"Déficit de ceros para χ mod {chi.q} (índice {chi.indice}): "
                    f"{encontrados} < {esperado:.2f}; subdivisión {ronda}")
        factor = params_zeta.FACTOR_SUBDIVISION
        fracciones = np.arange(factor) / factor
        fina = np.concatenate([(malla[:-1, None] + np.diff(malla)[:, None] * fracciones).ravel(), malla[-1:]])
        nuevos = np.asarray(funcion(fina))
        nuevos[::factor] = valores
        malla, valores = fina, nuevos

    s = _signo(valores)
    cambios = np.flatnonzero(s[:-1] != s[1:])
    if len(cambios) == 0:
        return []
    gammas, semi = refinar_diadico(funcion, malla[cambios], malla[cambios + 1], s[cambios], tol)
    ceros = [ZetaZero(i + 1, float(g), float(u)) for i, (g, u) in enumerate(zip(gammas, semi))]
    verificacion = verify_l_count(ceros, t_hi, chi.q)
    if not verificacion['completo']:
        logger.warning(f"Conteo de ceros de L incompleto para χ mod {chi.q}: {verificacion}")
    return [z for z in ceros if t_lo <= z.gamma < t_hi]


def verify_l_count(ceros: Sequence[ZetaZero], T: float, q: int) -> Dict:
    encontrados = sum(1 for z in ceros if z.gamma <= T)
    esperado = count_l_zeros_main_term(T, q)
    return {'T': T, 'q': q, 'encontrados': encontrados, 'esperado': esperado,
            'residuo': encontrados - esperado, 'completo': abs(encontrados - esperado) < 2.0}


# ==========================================
# 4. PRIMOS EN PROGRESIONES ARITMÉTICAS
# ==========================================
@dataclass
class APGapSummary:
    q: int
    a: int
    x: int
    pi_xaq: int
    avg_gap: float
    min_gap: Optional[int]
    least_prime: int
    delta_v_estimates: Dict[int, float]
    delta_v_bounds: Dict[int, float]
    gaps_congruentes: bool
    huecos_excepcionales: List[Tuple[int, int]] = field(default_factory=list)
    record_maximo: Optional[Tuple[int, int]] = None
    c_forma_grande: Optional[float] = None

    def como_dict(self) -> Dict:
        return {
            'q': self.q, 'a': self.a, 'x': self.x, 'pi_xaq': self.pi_xaq,
            'avg_gap': self.avg_gap, 'min_gap': self.min_gap, 'least_prime': self.least_prime,
            'delta_v_estimates': {str(k): v for k, v in self.delta_v_estimates.items()},
            'delta_v_bounds': {str(k): v for k, v in self.delta_v_bounds.items()},
            'gaps_congruentes': self.gaps_congruentes,
            'huecos_excepcionales': [list(h) for h in self.huecos_excepcionales],
            'record_maximo': list(self.record_maximo) if self.record_maximo else None,
            'c_forma_grande': self.c_forma_grande,
        }


def _validar_progresion(a: int, q: int) -> int:
    if q < 2:
        raise ValueError(f"Se requiere q ≥ 2 (q = {q})")
    g = math.gcd(a, q)
    if g > 1:
        raise ValueError(
            f"gcd({a}, {q}) = {g} > 1: la progresión contiene a lo sumo un primo"
        )
    return a % q


def primes_in_ap(x: int, a: int, q: int, hilos: int = 1) -> Tuple[int, np.ndarray]:
    """(π(x; q, a), primos ≡ a mod q hasta x ascendentes)."""
    resto = _validar_progresion(a, q)
    if x < 2:
        return 0, np.array([], dtype=np.int64)
    partes = [b[b % q == resto] for b in _bloques_primos(2, x, hilos)]
    primos = np.concatenate(partes) if partes else np.array([], dtype=np.int64)
    return int(len(primos)), primos


def least_prime(a: int, q: int) -> int:
    """Menor primo ≡ a (mod q); RuntimeError si se agota el techo de la criba."""
    resto = _validar_progresion(a, q)
    limite = max(1000, 50 * q)
    inferior = 2
    while inferior <= params_primos.TECHO_CRIBA:
        superior = min(limite, params_primos.TECHO_CRIBA)
        for bloque in _bloques_primos(inferior, superior):
            en = bloque[bloque % q == resto]
            if len(en):
                return int(en[0])
        inferior, limite = superior + 1, limite * 4
    raise RuntimeError(f"Sin primo ≡ {a} (mod {q}) por debajo de {params_primos.TECHO_CRIBA}")


def least_prime_sweep(q: int, epsilon: float = None) -> Dict:
    """max_a p(a, q) frente a φ(q)(log q)^{1+ε} y el exponente empírico log p / log q."""
    epsilon = params_dirichlet.EPSILON_PRIMO_MINIMO if epsilon is None else epsilon
    residuos = [a for a in range(1, q) if math.gcd(a, q) == 1]
    minimos = {a: least_prime(a, q) for a in residuos}
    a_max = max(minimos, key=lambda a: (minimos[a], -a))
    p_max = minimos[a_max]
    referencia = euler_phi(q) * math.log(q) ** (1.0 + epsilon)
    return {
        'q': q,
        'a_max': a_max,
        'p_max': p_max,
        'referencia': referencia,
        'cociente': p_max / referencia,
        'exponente': math.log(p_max) / math.log(q),
        'primos_minimos': minimos,
    }


def ap_gap_summary(x: int, a: int, q: int, v_max: int = 3, hilos: int = 1) -> APGapSummary:
    """
    Huecos qₙ₊₁ − qₙ de la progresión: mínimo, congruencia (mod q si q es par,
    mod 2q si es impar, salvo huecos que involucran al primo 2) y Δᵥ como
    mínimo de (qₙ₊ᵥ − qₙ)/(φ(q) log qₙ).
    """
    if not 1 <= v_max <= 3:
        raise ValueError(f"v_max debe estar entre 1 y 3 (v_max = {v_max})")
    cuenta, primos = primes_in_ap(x, a, q, hilos)
    if cuenta < 2:
        raise ValueError(f"Menos de dos primos ≡ {a} (mod {q}) hasta {x}")
    phi = euler_phi(q)
    huecos = np.diff(primos)
    modulo = q if q % 2 == 0 else 2 * q
    regulares = primos[:-1] != 2
    excepcionales = [(int(p), int(d)) for p, d in zip(primos[:-1][~regulares], huecos[~regulares])]
    congruentes = bool(np.all(huecos[regulares] % modulo == 0))
    if not congruentes:
        raise RuntimeError(f"Hueco no congruente con 0 mod {modulo} en la progresión {a} mod {q}")
    min_gap = int(huecos[regulares].min()) if regulares.any() else None

    log_q = np.log(primos.astype(float))
    estimaciones = {}
    for v in range(1, v_max + 1):
        if cuenta > v:
            estimaciones[v] = float(np.min((primos[v:] - primos[:-v]) / (phi * log_q[:-v])))
    cotas = {v: math.exp(EULER_GAMMA) * (math.sqrt(v) - 1.0) ** 2 for v in range(1, v_max + 1)}

    i = int(np.argmax(huecos))
    record = (int(primos[i]), int(huecos[i]))
    forma = forma_rankin(primos[i])
    c_grande = huecos[i] / (phi * forma) if forma else None

    resumen = APGapSummary(
        q=q, a=a % q, x=x, pi_xaq=cuenta, avg_gap=x / cuenta,
        min_gap=min_gap, least_prime=int(primos[0]),
        delta_v_estimates=estimaciones, delta_v_bounds=cotas,
        gaps_congruentes=congruentes, huecos_excepcionales=excepcionales,
        record_maximo=record, c_forma_grande=c_grande,
    )
    logger.info(f"Huecos en {a} mod {q} hasta {x}: π={cuenta}, mínimo={min_gap}, Δ₁≈{estimaciones.get(1)}")
    return resumen


def prime_race(x: int, q: int, hilos: int = 1) -> List[Dict]:
    """Conteo por clase frente a li(x)/φ(q) y qₙ frente a φ(q)·n log n."""
    if q < 3:
        raise ValueError(f"Se requiere q ≥ 3 (q = {q})")
    phi = euler_phi(q)
    referencia = li(x) / phi
    cuentas = np.zeros(q, dtype=np.int64)
    ultimo = np.zeros(q, dtype=np.int64)
    for bloque in _bloques_primos(2, x, hilos):
        restos = bloque % q
        cuentas += np.bincount(restos, minlength=q)
        clases, posicion = np.unique(restos[::-1], return_index=True)
        ultimo[clases] = bloque[::-1][posicion]
    filas = []
    for a in range(1, q):
        if math.gcd(a, q) != 1:
            continue
        cuenta = int(cuentas[a])
        fila = {'a': a, 'pi_xaq': cuenta, 'cociente_li': cuenta / referencia}
        if cuenta >= 2:
            fila['cociente_qn'] = float(ultimo[a] / (phi * cuenta * math.log(cuenta)))
        filas.append(fila)
    return filas


# ==========================================
# 5. DUALIDAD EN PROGRESIONES
# ==========================================
def _altura_para(n: int, q: int) -> float:
    t = DOS_PI
    while count_l_zeros_main_term(t, q) < n + 5:
        t *= 1.25
    return t


def ap_transfer_sweep(q: int, primos_ap: np.ndarray, gammas: np.ndarray,
                      n_lo: int, n_hi: int, k: int = 1) -> pd.DataFrame:
    """
    Barrido n ∈ [n_lo, n_hi] de las transferencias con φ(q): la cota
    cero←primo 4π(qₙ₊ₖ − qₙ)/(φ(q) log²n) y la cota primo←cero
    (γₙ₊ₖ − γₙ)·φ(q) log²n/π. Mismas columnas que el barrido de ζ.
    """
    if k < 1:
        raise ValueError(f"k debe ser ≥ 1 (k = {k})")
    phi = euler_phi(q)
    primos_ap = np.asarray(primos_ap, dtype=np.int64)
    gammas = np.asarray(gammas, dtype=float)
    n_lo = max(n_lo, 2)
    n_hi = min(n_hi, len(gammas) - k, len(primos_ap) - k)
    if n_hi < n_lo:
        return pd.DataFrame(columns=COLUMNAS_BARRIDO)
    n = np.arange(n_lo, n_hi + 1)
    ln2 = np.log(n) ** 2
    q_gap = primos_ap[n - 1 + k] - primos_ap[n - 1]
    z_gap = gammas[n - 1 + k] - gammas[n - 1]
    bound_pz = 4.0 * math.pi * q_gap / (phi * ln2)
    bound_zp = z_gap * phi * ln2 / math.pi
    return pd.DataFrame({
        'n': n,
        'k': k,
        'p_gap': q_gap,
        'z_gap': z_gap,
        'bound_pz': bound_pz,
        'bound_zp': bound_zp,
        'violation_pz': (z_gap > bound_pz).astype(int),
        'violation_zp': (q_gap > bound_zp).astype(int),
    })


def forma_pequena_l(g: np.ndarray, v: int) -> np.ndarray:
    """(√v − 1)²/log γ: envolvente de las sumas de v espaciamientos pequeños."""
    return (math.sqrt(v) - 1.0) ** 2 / np.log(g)


def forma_grande_l(g: np.ndarray) -> np.ndarray:
    """
    log log γ · log₄ γ / (log γ · (log₃ γ)²); NaN mientras log₄ γ no sea
    positivo, es decir en todas las alturas alcanzables con L.
    """
    with np.errstate(invalid='ignore', divide='ignore'):
        l1 = np.log(g)
        l2 = np.log(l1)
        l3 = np.log(l2)
        l4 = np.log(l3)
        valor = l2 * l4 / (l1 * l3 ** 2)
    return np.where(np.isfinite(l4) & (l4 > 0), valor, np.nan)


def _envolventes_l(n: np.ndarray, gammas: np.ndarray, v: int) -> Dict:
    """Formas de espaciamientos pequeños (v pasos) y grandes (1 paso) en los extremos corrientes."""
    n = n[n + v <= len(gammas)]
    if len(n) == 0:
        return {}
    g = gammas[n - 1]
    suma_v = gammas[n - 1 + v] - g
    paso = gammas[n] - g
    acum_min = np.minimum.accumulate(suma_v)
    acum_max = np.maximum.accumulate(paso)
    pos_min = np.flatnonzero(np.concatenate([[True], acum_min[1:] < acum_min[:-1]]))
    pos_max = np.flatnonzero(np.concatenate([[True], acum_max[1:] > acum_max[:-1]]))
    pequena = forma_pequena_l(g[pos_min], v)
    grande = forma_grande_l(g[pos_max])
    minimos = [{'n': int(n[i]), 'gamma_n': float(g[i]), 'suma_v': float(suma_v[i]),
                'forma': float(f), 'cociente': float(suma_v[i] / f)}
               for i, f in zip(pos_min, pequena)]
    maximos = [{'n': int(n[i]), 'gamma_n': float(g[i]), 'espaciamiento': float(paso[i]),
                'forma': None if math.isnan(f) else float(f),
                'cociente': None if math.isnan(f) else float(paso[i] / f)}
               for i, f in zip(pos_max, grande)]
    definida = np.isfinite(grande)
    return {
        'v': v,
        'minimos_corrientes': minimos,
        'maximos_corrientes': maximos,
        'c0_ajustada': float(min(m['cociente'] for m in minimos)),
        'c1_ajustada': float(np.max(paso[pos_max][definida] / grande[definida])) if definida.any() else None,
    }


def ap_duality_probe(q: int, a: int, chi: DirichletCharacter, n_range: Tuple[int, int],
                     primos_ap: Optional[np.ndarray] = None,
                     ceros: Optional[Sequence[ZetaZero]] = None,
                     tol: float = None, k: int = 1, v: int = 4) -> Dict:
    """
    Emparejamiento qₙ ↔ γₙ(χ): cociente qₙ·2π/(φ(q)γₙ log²n) por década,
    espaciamientos de ceros de L con la normalización log(qγₙ/2π)/(2π) y,
    al lado, log(γₙ)/(2π); extremos corrientes y violaciones de la cota
    inferior 4πq/(φ(q) log²γₙ).

    Con paso k agrega las transferencias de huecos en ambos sentidos
    (cota, real, cociente) en n_lo y sus fracciones de violación por
    década; con v ≥ 2 evalúa las envolventes de espaciamientos pequeños
    (sumas de v pasos) y grandes en los extremos corrientes.
    """
    n_lo, n_hi = n_range
    if chi.q != q:
        raise ValueError(f"El carácter es módulo {chi.q}, no {q}")
    if k < 1:
        raise ValueError(f"k debe ser ≥ 1 (k = {k})")
    if v < 2:
        raise ValueError(f"v debe ser ≥ 2: la envolvente pequeña se anula en v = 1 (v = {v})")
    phi = euler_phi(q)
    if ceros is None:
        altura = min(_altura_para(n_hi + max(k, v), q), params_dirichlet.ALTURA_MAXIMA_L)
        ceros = find_l_zeros(chi, 0.0, altura, tol)
    if primos_ap is None:
        m = n_hi + k + 10
        x = int(1.5 * phi * m * math.log(m)) + 100
        _, primos_ap = primes_in_ap(min(x, params_primos.TECHO_CRIBA), a, q)
    gammas = np.array([z.gamma for z in ceros], dtype=float)
    n_hi = min(n_hi, len(gammas) - 1, len(primos_ap))
    n_lo = max(n_lo, 2)
    if n_hi < n_lo:
        return {}

    n = np.arange(n_lo, n_hi + 1)
    g = gammas[n - 1]
    ln = np.log(n)
    qn = np.asarray(primos_ap, dtype=float)[n - 1]
    ratio = qn * DOS_PI / (phi * g * ln ** 2)
    raw = gammas[n] - g
    delta = raw * np.log(q * g / DOS_PI) / DOS_PI
    delta_alt = raw * np.log(g) / DOS_PI
    cota = 4.0 * math.pi * q / (phi * np.log(g) ** 2)
    decada = np.floor(np.log10(n)).astype(int)
    barrido = ap_transfer_sweep(q, primos_ap, gammas, n_lo, n_hi, k)
    transferencia = {}
    if not barrido.empty:
        primera = barrido.iloc[0]
        transferencia = {
            'n': int(primera['n']),
            'primo_a_cero': {'cota': float(primera['bound_pz']), 'real': float(primera['z_gap']),
                             'cociente': float(primera['z_gap'] / primera['bound_pz'])},
            'cero_a_primo': {'cota': float(primera['bound_zp']), 'real': int(primera['p_gap']),
                             'cociente': float(primera['p_gap'] / primera['bound_zp'])},
        }
    return {
        'q': q, 'a': a % q, 'chi_index': chi.indice, 'k': k,
        'n_lo': int(n_lo), 'n_hi': int(n_hi),
        'ratio_por_decada': [{'decada': int(d), 'ratio': float(ratio[decada == d].mean())}
                             for d in np.unique(decada)],
        'delta_media': float(delta.mean()),
        'delta_alternativa_media': float(delta_alt.mean()),
        'delta_minimo': float(delta.min()),
        'delta_maximo': float(delta.max()),
        'minimos_corrientes': [int(n[i]) for i in np.flatnonzero(
            np.concatenate([[True], np.diff(np.minimum.accumulate(delta)) < 0]))],
        'maximos_corrientes': [int(n[i]) for i in np.flatnonzero(
            np.concatenate([[True], np.diff(np.maximum.accumulate(delta)) > 0]))],
        'violaciones_cota_inferior': int(np.count_nonzero(raw < cota)),
        'transferencia': transferencia,
        'violaciones_por_decada': SondaDualidad.fracciones_por_decada(barrido),
        'envolventes': _envolventes_l(n, gammas, v),
        'nota_uniformidad': "condición sobre ω(q) vacía para q de escritorio; no se impone",
    }

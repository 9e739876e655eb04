"""Pruebas de caracteres de Dirichlet, funciones L y primos en progresiones."""
import math

import numpy as np
import pytest
from mpmath import mp

from laboratorio.dirichlet_engine import (
    ap_duality_probe, ap_gap_summary, ap_transfer_sweep, characters, conductor,
    count_l_zeros_main_term, euler_phi, find_l_zeros, forma_grande_l, forma_pequena_l,
    gauss_sum, hardy_z_chi, l_eval, least_prime, least_prime_sweep, order, prime_race,
    primes_in_ap, root_number, verify_l_count,
)
from laboratorio.prime_engine import sieve_segment
from laboratorio.spacing_stats import normalize_spacings

mp.dps = 25


def _chi4():
    return characters(4)[1]


def _chi3():
    return characters(3)[1]


def _l_mpmath(s, chi):
    return complex(mp.dirichlet(mp.mpc(s.real, s.imag), [complex(v) for v in chi.values]))


# ==========================================
# Caracteres
# ==========================================
@pytest.mark.parametrize('q', [3, 4, 5, 8, 12, 15, 16, 21, 100])
def test_cantidad_y_principal(q):
    tabla = characters(q)
    assert len(tabla) == euler_phi(q)
    assert tabla[0].principal
    assert sum(1 for chi in tabla if chi.principal) == 1


@pytest.mark.parametrize('q', [5, 8, 15, 16])
def test_ortogonalidad(q):
    tabla = characters(q)
    phi = euler_phi(q)
    for i, a in enumerate(tabla):
        for j, b in enumerate(tabla):
            producto = np.sum(a.values * np.conj(b.values))
            assert abs(producto - (phi if i == j else 0)) < 1e-9


def test_caracteres_cuadraticos_conocidos():
    chi4 = _chi4()
    assert [chi4(n).real for n in range(4)] == [0.0, 1.0, 0.0, -1.0]
    assert chi4.parity == 1 and not chi4.even
    assert chi4.primitive and chi4.real
    assert order(chi4) == 2 and conductor(chi4) == 4
    chi3 = _chi3()
    assert chi3(2) == pytest.approx(-1.0)
    assert chi3.parity == 1


def test_conductores_modulo_12():
    assert sorted({chi.conductor for chi in characters(12)}) == [1, 3, 4, 12]
    assert sum(1 for chi in characters(12) if chi.primitive) == 1


def test_ordenes_modulo_7():
    assert sorted(order(chi) for chi in characters(7)) == [1, 2, 3, 3, 6, 6]


def test_modulos_fuera_de_rango():
    with pytest.raises(ValueError):
        characters(2)
    with pytest.raises(ValueError):
        characters(101)


# ==========================================
# Sumas de Gauss y número raíz
# ==========================================
@pytest.mark.parametrize('q', [3, 4, 5, 7, 8, 11])
def test_gauss_primitivos(q):
    for chi in characters(q):
        if chi.primitive and not chi.principal:
            assert abs(abs(gauss_sum(chi)) - math.sqrt(q)) < 1e-9
            assert abs(abs(root_number(chi)) - 1.0) < 1e-9


def test_numero_raiz_de_caracteres_reales():
    assert root_number(_chi4()) == pytest.approx(1.0)
    assert root_number(_chi3()) == pytest.approx(1.0)


def test_numero_raiz_no_primitivo():
    inducido = next(chi for chi in characters(12) if chi.conductor == 4)
    with pytest.raises(RuntimeError):
        root_number(inducido)


# ==========================================
# Funciones L
# ==========================================
def test_valores_en_s_igual_a_uno():
    assert l_eval(1.0, _chi4()) == pytest.approx(math.pi / 4, abs=1e-10)
    assert l_eval(1.0, _chi3()) == pytest.approx(math.pi / (3 * math.sqrt(3)), abs=1e-10)


@pytest.mark.parametrize('s', [0.5 + 10j, 0.5 + 150j, 1.2 + 3j, 0.3 + 40j])
def test_l_contra_mpmath(s):
    for q in (5, 8):
        for chi in characters(q)[1:]:
            assert abs(l_eval(s, chi) - _l_mpmath(s, chi)) < 1e-8


def test_l_dominio():
    with pytest.raises(ValueError):
        l_eval(0.5 + 1j, characters(5)[0])
    with pytest.raises(ValueError):
        l_eval(2.0, _chi4())
    with pytest.raises(ValueError):
        l_eval(0.5 + 2000j, _chi4())


def test_z_chi_es_el_modulo_de_l():
    for chi in (_chi4(), characters(5)[1]):
        for t in (3.0, 17.5, 60.0):
            assert abs(abs(hardy_z_chi(t, chi)) - abs(l_eval(0.5 + 1j * t, chi))) < 1e-8


def test_primeros_ceros():
    ceros4 = find_l_zeros(_chi4(), 0.0, 30.0)
    assert ceros4[0].index == 1
    assert ceros4[0].gamma == pytest.approx(6.020948904697, abs=1e-7)
    ceros3 = find_l_zeros(_chi3(), 0.0, 30.0)
    assert ceros3[0].gamma == pytest.approx(8.039737155681, abs=1e-7)
    for z in ceros4 + ceros3[:3]:
        chi = _chi4() if z in ceros4 else _chi3()
        assert abs(_l_mpmath(0.5 + 1j * z.gamma, chi)) < 1e-6


def test_ceros_de_caracter_complejo():
    chi = characters(5)[1]
    assert not chi.real
    for z in find_l_zeros(chi, 0.0, 25.0):
        assert abs(_l_mpmath(0.5 + 1j * z.gamma, chi)) < 1e-6


def test_conteo_de_ceros_de_l():
    assert count_l_zeros_main_term(100.0, 3) == pytest.approx(45.6, abs=0.1)
    assert count_l_zeros_main_term(0.0, 3) == 0.0
    ceros = find_l_zeros(_chi3(), 0.0, 100.0)
    assert abs(len(ceros) - count_l_zeros_main_term(100.0, 3)) < 2.0
    assert verify_l_count(ceros, 100.0, 3)['completo']


def test_rango_parcial_conserva_indices():
    todos = find_l_zeros(_chi4(), 0.0, 40.0)
    parciales = find_l_zeros(_chi4(), 20.0, 40.0)
    por_indice = {z.index: z.gamma for z in todos}
    assert parciales
    for z in parciales:
        assert z.gamma == pytest.approx(por_indice[z.index], abs=1e-12)


def test_espaciamiento_medio_de_ceros_de_l():
    chi = _chi3()
    ceros = find_l_zeros(chi, 0.0, 330.0)[:200]
    assert len(ceros) == 200
    g = np.array([z.gamma for z in ceros])
    delta = np.diff(g) * np.log(3 * g[:-1] / (2 * math.pi)) / (2 * math.pi)
    assert delta.mean() == pytest.approx(1.0, abs=0.1)
    assert len(normalize_spacings(ceros)) == 199


def test_ceros_requisitos():
    with pytest.raises(ValueError):
        find_l_zeros(characters(5)[0], 0.0, 10.0)
    inducido = next(chi for chi in characters(12) if chi.conductor == 4)
    with pytest.raises(ValueError):
        find_l_zeros(inducido, 0.0, 10.0)
    with pytest.raises(ValueError):
        find_l_zeros(characters(13)[1], 0.0, 10.0)
    with pytest.raises(ValueError):
        find_l_zeros(_chi4(), 0.0, 2000.0)


# ==========================================
# Primos en progresiones
# ==========================================
def test_primos_1_mod_4_hasta_50():
    cuenta, lista = primes_in_ap(50, 1, 4)
    assert cuenta == 6
    assert lista.tolist() == [5, 13, 17, 29, 37, 41]
    assert np.diff(lista).tolist() == [8, 4, 12, 8, 4]


def test_progresion_no_coprima():
    with pytest.raises(ValueError, match='gcd'):
        primes_in_ap(100, 2, 4)


def test_primo_minimo():
    assert least_prime(1, 4) == 5
    assert least_prime(2, 3) == 2
    assert least_prime(1, 7) == 29
    assert least_prime(3, 7) == 3
    barrido = least_prime_sweep(7)
    assert barrido['p_max'] == 29 and barrido['a_max'] == 1
    assert set(barrido['primos_minimos']) == {1, 2, 3, 4, 5, 6}


def test_resumen_de_huecos_mod_3():
    resumen = ap_gap_summary(10 ** 6, 1, 3)
    assert resumen.gaps_congruentes
    assert resumen.min_gap == 6
    assert resumen.least_prime == 7
    assert resumen.delta_v_estimates[1] < 0.25
    assert set(resumen.delta_v_bounds) == {1, 2, 3}
    excepcional = ap_gap_summary(1000, 2, 3)
    assert excepcional.huecos_excepcionales == [(2, 3)]
    assert excepcional.gaps_congruentes


def test_resumen_de_huecos_mod_4():
    resumen = ap_gap_summary(50, 1, 4)
    assert resumen.min_gap == 4
    assert resumen.record_maximo == (17, 12)
    assert resumen.como_dict()['pi_xaq'] == 6


def test_carrera_de_primos():
    filas = prime_race(1000, 4)
    assert [f['a'] for f in filas] == [1, 3]
    assert sum(f['pi_xaq'] for f in filas) == 167
    assert filas[1]['pi_xaq'] > filas[0]['pi_xaq']


def test_dualidad_en_progresion():
    chi = _chi4()
    reporte = ap_duality_probe(4, 1, chi, (10, 60))
    assert reporte['q'] == 4 and reporte['chi_index'] == 1
    assert reporte['n_lo'] == 10
    assert [f['decada'] for f in reporte['ratio_por_decada']] == [1]
    assert 0.5 < reporte['delta_media'] < 1.5
    assert ap_duality_probe(4, 1, chi, (10, 60), ceros=[]) == {}


def test_caracteres_modulo_5():
    tabla = characters(5)
    complejos = [chi for chi in tabla if not chi.real]
    assert len(tabla) == 4 and len(complejos) == 2
    assert all(order(chi) == 4 for chi in complejos)


def test_equidistribucion_modulo_3():
    uno, _ = primes_in_ap(10 ** 6, 1, 3)
    dos, _ = primes_in_ap(10 ** 6, 2, 3)
    assert uno / dos == pytest.approx(1.0, abs=0.01)


def test_primo_minimo_modulo_17():
    assert least_prime(3, 4) == 3
    barrido = least_prime_sweep(17)
    assert barrido['p_max'] == 103 and barrido['a_max'] == 1
    assert barrido['cociente'] == pytest.approx(103 / (16 * math.log(17) ** 2))


# ==========================================
# Invariantes
# ==========================================
@pytest.mark.parametrize('q', [4, 7, 12])
def test_particion_por_residuos(q):
    x = 10 ** 4
    unidas = np.sort(np.concatenate([primes_in_ap(x, a, q)[1] for a in range(1, q) if math.gcd(a, q) == 1]))
    todas = sieve_segment(2, x)
    assert np.array_equal(unidas, todas[q % todas != 0])


def test_l_del_conjugado():
    chi = characters(5)[1]
    conjugado = next(c for c in characters(5) if np.allclose(c.values, np.conj(chi.values)))
    for s in (0.5 + 14.0j, 0.8 + 3.5j):
        assert abs(l_eval(s.conjugate(), conjugado) - l_eval(s, chi).conjugate()) < 1e-10


def test_huecos_modulo_4_hasta_un_millon():
    resumen = ap_gap_summary(10 ** 6, 1, 4)
    assert resumen.gaps_congruentes
    assert resumen.delta_v_estimates[1] < 0.25


# ==========================================
# Transferencias y envolventes en progresiones
# ==========================================
def test_barrido_de_transferencias_en_progresion():
    _, lista = primes_in_ap(2000, 1, 4)
    gammas = np.array([z.gamma for z in find_l_zeros(_chi4(), 0.0, 100.0)])
    barrido = ap_transfer_sweep(4, lista, gammas, 10, 40, 2)
    assert barrido['n'].iloc[0] == 10 and barrido['k'].iloc[0] == 2
    fila = barrido.iloc[0]
    assert fila['p_gap'] == 12
    assert fila['bound_pz'] == pytest.approx(4 * math.pi * 12 / (2 * math.log(10) ** 2))
    assert fila['bound_zp'] == pytest.approx(fila['z_gap'] * 2 * math.log(10) ** 2 / math.pi)
    assert ap_transfer_sweep(4, lista, gammas, 500, 600, 1).empty
    with pytest.raises(ValueError):
        ap_transfer_sweep(4, lista, gammas, 10, 40, 0)


def test_dualidad_en_progresion_con_paso_y_envolventes():
    reporte = ap_duality_probe(4, 1, _chi4(), (10, 60), k=2)
    assert reporte['k'] == 2
    transferencia = reporte['transferencia']
    assert transferencia['n'] == 10
    assert transferencia['cero_a_primo']['real'] == 12
    cota = transferencia['primo_a_cero']['cota']
    assert transferencia['primo_a_cero']['cociente'] == pytest.approx(transferencia['primo_a_cero']['real'] / cota)
    assert [f['decada'] for f in reporte['violaciones_por_decada']] == [1]
    envolventes = reporte['envolventes']
    assert envolventes['v'] == 4
    assert envolventes['minimos_corrientes'][0]['n'] == 10
    assert envolventes['c0_ajustada'] > 0
    # la forma grande exige log₄ γ > 0, fuera del alcance de L
    assert envolventes['c1_ajustada'] is None
    assert all(m['forma'] is None for m in envolventes['maximos_corrientes'])
    with pytest.raises(ValueError):
        ap_duality_probe(4, 1, _chi4(), (10, 60), v=1)


def test_formas_de_envolvente():
    assert forma_pequena_l(np.array([math.e]), 4)[0] == pytest.approx(1.0)
    assert np.isnan(forma_grande_l(np.array([1e3]))[0])
    assert np.isfinite(forma_grande_l(np.array([1e30]))[0])

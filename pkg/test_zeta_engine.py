"""Pruebas del motor de la función Z de Hardy, con mpmath como referencia."""
import math

import numpy as np
import pytest
from mpmath import mp

from laboratorio.configuracion import ErrorVersionCache, params_zeta
from laboratorio.zeta_engine import (
    CacheCeros, count_zeros_main_term, find_zeros, gram_index, gram_law_stats,
    gram_points, hardy_z, modulus_report, refinar_diadico, s_residual_curve,
    theta, verify_count, zeta_critical,
)

mp.dps = 30


# ==========================================
# theta y Z
# ==========================================
@pytest.mark.parametrize('t', [3.0, 9.5, 10.0, 14.1, 100.0, 1234.5])
def test_theta_contra_mpmath(t):
    assert abs(theta(t) - float(mp.siegeltheta(t))) < 1e-10


def test_theta_vectorizada():
    t = np.array([5.0, 50.0, 500.0])
    valores = theta(t)
    assert isinstance(valores, np.ndarray)
    assert valores[1] == pytest.approx(theta(50.0), abs=1e-14)


@pytest.mark.parametrize('t', [0.5, 7.0, 20.0, 150.0, 199.0])
def test_hardy_z_euler_maclaurin(t):
    assert abs(hardy_z(t) - float(mp.siegelz(t))) < 1e-9


@pytest.mark.parametrize('t', [250.0, 1000.0, 5000.0, 20000.0])
def test_hardy_z_riemann_siegel(t):
    assert abs(hardy_z(t) - float(mp.siegelz(t))) < 1e-6


def test_hardy_z_rechaza_t_negativo():
    with pytest.raises(ValueError):
        hardy_z(-1.0)


def test_zeta_critical_y_conjugacion():
    valor = zeta_critical(30.0)
    esperado = complex(mp.zeta(mp.mpc(0.5, 30)))
    assert abs(valor - esperado) < 1e-8
    assert abs(zeta_critical(-30.0) - esperado.conjugate()) < 1e-8
    assert abs(zeta_critical(14.134725141734693)) < 1e-7


# ==========================================
# Puntos de Gram
# ==========================================
def test_gram_points_resuelven_theta():
    puntos = gram_points(0, 5)
    assert [g.index for g in puntos] == list(range(6))
    assert puntos[0].t == pytest.approx(17.8455995, abs=1e-6)
    for g in puntos:
        assert abs(theta(g.t) - g.index * math.pi) < 1e-9


def test_gram_index():
    assert gram_index(5.0) == -2
    assert gram_index(20.0) == 0
    g = gram_points(40, 40)[0].t
    assert gram_index(g + 1e-6) == 40


def test_gram_points_rango_invalido():
    with pytest.raises(ValueError):
        gram_points(3, 1)


# ==========================================
# Refinamiento diádico
# ==========================================
def test_refinamiento_no_depende_del_intervalo():
    def f(x):
        return x - 0.3

    tol = 1e-9
    a, semi_a = refinar_diadico(f, np.array([0.0]), np.array([1.0]), np.array([-1.0]), tol)
    b, semi_b = refinar_diadico(f, np.array([0.2]), np.array([0.9]), np.array([-1.0]), tol)
    assert a[0] == b[0]
    assert semi_a[0] == semi_b[0] <= tol
    assert abs(a[0] - 0.3) <= semi_a[0]


# ==========================================
# Búsqueda de ceros
# ==========================================
def test_29_ceros_bajo_100(ceros_100):
    assert len(ceros_100) == 29
    assert [z.index for z in ceros_100] == list(range(1, 30))
    assert ceros_100[0].gamma == pytest.approx(14.134725141734693, abs=1e-8)


def test_ceros_contra_mpmath(ceros_100):
    for z in ceros_100:
        assert abs(z.gamma - float(mp.zetazero(z.index).imag)) < 1e-8
        assert z.uncertainty <= params_zeta.TOLERANCIA


def test_indices_globales_en_rango_alto():
    ceros = find_zeros(1000.0, 1100.0)
    assert ceros
    for z in (ceros[0], ceros[-1]):
        assert abs(z.gamma - float(mp.zetazero(z.index).imag)) < 1e-6
    assert all(1000.0 <= z.gamma < 1100.0 for z in ceros)
    assert np.all(np.diff([z.index for z in ceros]) == 1)


def test_ceros_compartidos_son_identicos(ceros_100):
    parciales = find_zeros(10.0, 60.0)
    por_indice = {z.index: z.gamma for z in ceros_100}
    assert parciales
    for z in parciales:
        assert z.gamma == por_indice[z.index]


def test_hilos_y_lotes_no_cambian_el_resultado(monkeypatch):
    secuencial = find_zeros(0.0, 600.0)
    monkeypatch.setattr(params_zeta, 'BLOQUES_POR_LOTE', 16)
    paralelo = find_zeros(0.0, 600.0, hilos=4)
    assert [(z.index, z.gamma) for z in secuencial] == [(z.index, z.gamma) for z in paralelo]


def test_rango_vacio_y_rangos_invalidos():
    assert find_zeros(50.0, 50.0) == []
    with pytest.raises(ValueError):
        find_zeros(100.0, 50.0)
    with pytest.raises(ValueError):
        find_zeros(-1.0, 50.0)


# ==========================================
# Conteo y verificación
# ==========================================
def test_termino_principal():
    assert count_zeros_main_term(100.0) == pytest.approx(29.0, abs=0.05)
    with pytest.raises(ValueError):
        count_zeros_main_term(6.0)


def test_verificacion_completa(ceros_100):
    v = verify_count(ceros_100, 100.0)
    assert v.complete
    assert v.zeros_found == 29
    assert abs(v.s_residual) < 2.0
    assert v.gram_count_ok is True


def test_verificacion_detecta_cero_faltante(ceros_100):
    incompleta = ceros_100[:10] + ceros_100[11:]
    v = verify_count(incompleta, 100.0)
    assert v.zeros_found == 28
    assert not v.complete


def test_verificacion_por_debajo_de_dos_pi():
    v = verify_count([], 5.0)
    assert v.complete and v.zeros_found == 0


def test_residuo_y_ley_de_gram(ceros_2000):
    residuos = s_residual_curve(ceros_2000, [500.0, 1000.0, 1500.0])
    assert np.all(np.abs(residuos) < 2.0)
    ley = gram_law_stats(100.0, 2000.0, ceros_2000)
    assert ley['puntos'] > 1000
    assert 0.5 < ley['fraccion_buenos'] <= 1.0
    assert 0.5 < ley['fraccion_un_cero'] <= 1.0


def test_reporte_de_modulo():
    reporte = modulus_report(1.0, 300.0, muestras=3000)
    assert reporte['max_modulo'] > 1.0
    assert 1.0 <= reporte['t_max_modulo'] <= 300.0
    assert 'convencion' in reporte


# ==========================================
# Caché
# ==========================================
def test_cache_se_extiende_y_reverifica(tmp_path, ceros_100):
    cache = CacheCeros(str(tmp_path))
    primeros = cache.extender(50.0)
    assert len(primeros) == 10
    todos = cache.extender(100.0)
    assert [z.index for z in todos] == list(range(1, 30))

    tol, cobertura, leidos = cache.leer()
    assert tol == params_zeta.TOLERANCIA
    assert cobertura == 100.0
    for a, b in zip(leidos, ceros_100):
        assert a.index == b.index
        assert abs(a.gamma - b.gamma) < 1e-12

    with open(cache.ruta, encoding='utf-8') as f:
        lineas = f.read().splitlines()
    assert lineas[0].startswith('zerocache v1 tol=')
    assert lineas.count('# t_max=50.0') == 1


def test_cache_con_version_ajena(tmp_path):
    (tmp_path / CacheCeros.NOMBRE).write_text("zerocache v0 tol=1e-09\n", encoding='utf-8')
    with pytest.raises(ErrorVersionCache):
        CacheCeros(str(tmp_path)).leer()


def test_theta_es_impar():
    for t in (5.0, 20.0, 100.0):
        assert theta(-t) == pytest.approx(-theta(t), abs=1e-12)


def test_verificacion_sin_ceros_bajo_el_primero():
    v = verify_count([], 10.0)
    assert v.complete
    assert v.zeros_found == 0


# ==========================================
# Escala de aceptación
# ==========================================
@pytest.mark.parametrize('T', [500.0, 1000.0, 5000.0])
def test_conteo_consistente_hasta_5000(ceros_5000, T):
    v = verify_count(ceros_5000, T)
    assert v.complete
    assert abs(v.zeros_found - count_zeros_main_term(T)) < 2.0


def test_rangos_adyacentes_se_concatenan(ceros_2000):
    unidos = find_zeros(0.0, 1000.0) + find_zeros(1000.0, 2000.0)
    assert [(z.index, z.gamma) for z in unidos] == [(z.index, z.gamma) for z in ceros_2000]

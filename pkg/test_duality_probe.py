"""Pruebas de la sonda de dualidad primo–cero."""
import math

import pytest

from laboratorio.duality_probe import (
    COLUMNAS_BARRIDO, SondaDualidad, cota_cero_a_primo, cota_primo_a_cero,
    extreme_spacing_probe,
)
from laboratorio.prime_engine import gap_stream, nth_primes
from laboratorio.spacing_stats import normalize_spacings


@pytest.fixture(scope='module')
def sonda(ceros_2000):
    return SondaDualidad(nth_primes(len(ceros_2000)), ceros_2000)


def test_cociente_en_n_2(sonda):
    reporte = sonda.duality_ratio(2)
    assert reporte.p_n == 3
    assert reporte.ratio == pytest.approx(0.297, abs=1e-3)
    assert reporte.reference == pytest.approx(1 / (2 * math.pi))


def test_cociente_en_n_100(sonda):
    reporte = sonda.duality_ratio(100)
    assert reporte.p_n == 541
    assert reporte.gamma_n == pytest.approx(236.5242296658, abs=1e-6)
    assert reporte.ratio == pytest.approx(0.1078, abs=1e-3)
    assert 0.7 < reporte.primo_asintotico < 1.3
    assert 'bound_pz' in reporte.transfer_bounds


def test_indices_fuera_de_rango(sonda):
    with pytest.raises(ValueError):
        sonda.duality_ratio(1)
    with pytest.raises(ValueError):
        sonda.duality_ratio(sonda.n_max + 1)


def test_transferencia_primo_a_cero(sonda):
    cota, real = sonda.gap_transfer_prime_to_zero(1000, 1)
    assert sonda.p(1001) - sonda.p(1000) == 8
    assert cota == pytest.approx(2.107, abs=1e-3)
    assert cota == pytest.approx(cota_primo_a_cero(8, 1000))
    assert real == pytest.approx(sonda.gamma(1001) - sonda.gamma(1000))


def test_transferencia_cero_a_primo(sonda):
    cota, real = sonda.gap_transfer_zero_to_prime(500, 3)
    z_gap = sonda.gamma(503) - sonda.gamma(500)
    assert cota == pytest.approx(cota_cero_a_primo(z_gap, 500))
    assert real == sonda.p(503) - sonda.p(500)


def test_paso_cero_y_paso_excesivo(sonda):
    assert sonda.gap_transfer_prime_to_zero(100, 0) == (0, 0)
    with pytest.raises(ValueError):
        sonda.gap_transfer_zero_to_prime(100, 11)


def test_barrido_y_fracciones(sonda):
    barrido = sonda.barrido(100, 1200, 1)
    assert list(barrido.columns) == COLUMNAS_BARRIDO
    assert barrido['n'].iloc[0] == 100 and barrido['n'].iloc[-1] == 1200
    fracciones = sonda.fracciones_por_decada(barrido)
    assert [f['decada'] for f in fracciones] == [2, 3]
    assert all(0.0 <= f['fraccion_pz'] <= 1.0 for f in fracciones)


def test_barrido_vacio(sonda):
    barrido = sonda.barrido(5000, 6000, 1)
    assert barrido.empty
    assert sonda.fracciones_por_decada(barrido) == []


def test_cocientes_por_decada(sonda):
    filas = sonda.cocientes_por_decada(2, 1500)
    assert [f['decada'] for f in filas] == [0, 1, 2, 3]
    ultima = filas[-1]
    assert 0.7 < ultima['primo_asintotico'] < 1.3
    assert ultima['cero_asintotico'] > 1.0


def test_constante_de_huecos_y_diccionario(sonda):
    reporte = sonda.gap_constant_probe(1000)
    assert reporte['n_max'] == 1000
    assert reporte['hueco_minimo'] == 2
    assert reporte['c_ajustada'] > 0
    paso = sonda.k_step_dictionary(100, 2)
    assert paso['p_sum'] == sonda.p(102) - sonda.p(100)
    assert paso['cociente'] > 0


def test_cero_inicial_obligatorio(ceros_100):
    with pytest.raises(ValueError):
        SondaDualidad(nth_primes(10), ceros_100[1:])


def test_extremos_a_lo_largo_de_la_altura(ceros_2000):
    muestras = normalize_spacings(ceros_2000)
    huecos = []
    for par in gap_stream(10 ** 5):
        huecos.append(par)
        if len(huecos) == len(muestras):
            break
    reporte = extreme_spacing_probe(muestras, huecos)
    assert reporte['indices_solapados'] == len(muestras)
    assert reporte['minimos_corrientes'][0]['n'] == 1
    assert reporte['decadas_descenso_minimo'] >= 1
    assert extreme_spacing_probe(muestras, []) == {}


def test_transferencias_se_componen():
    for z_gap, n in ((0.5, 100), (2.25, 1000)):
        assert cota_primo_a_cero(cota_cero_a_primo(z_gap, n), n) == pytest.approx(4 * z_gap)

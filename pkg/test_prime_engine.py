"""Pruebas de la criba segmentada, el flujo de huecos y las rachas de compuestos."""
import math

import numpy as np
import pytest

from laboratorio.configuracion import ErrorVersionCache, params_primos
from laboratorio.prime_engine import (
    CachePrimos, composite_run_factorial, composite_run_primorial, composite_run_report,
    forma_rankin, gap_record_report, gap_records, gap_stream, gap_summary, li,
    nth_prime_bounds, nth_primes, prime_count_report, prime_pi, sieve_segment,
    small_gap_report,
)


def _es_primo(n):
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


# ==========================================
# Criba
# ==========================================
def test_criba_pequena():
    assert sieve_segment(2, 30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert sieve_segment(90, 100).tolist() == [97]
    assert sieve_segment(24, 28).tolist() == []
    assert sieve_segment(0, 1).tolist() == []


def test_criba_ventana_contra_division():
    lo, hi = 10 ** 6, 10 ** 6 + 500
    esperado = [n for n in range(lo, hi + 1) if _es_primo(n)]
    assert sieve_segment(lo, hi).tolist() == esperado


def test_segmentos_pequenos_e_hilos(monkeypatch):
    referencia = sieve_segment(2, 20000)
    monkeypatch.setattr(params_primos, 'TAMANO_SEGMENTO', 37)
    assert np.array_equal(sieve_segment(2, 20000), referencia)
    assert np.array_equal(sieve_segment(2, 20000, hilos=3), referencia)


def test_criba_rango_invalido():
    with pytest.raises(ValueError):
        sieve_segment(10, 5)
    with pytest.raises(ValueError):
        sieve_segment(2, params_primos.TECHO_CRIBA + 1)


def test_conteo_y_enesimos():
    assert prime_pi(10 ** 6) == 78498
    assert prime_pi(1) == 0
    assert nth_primes(10).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert int(nth_primes(1000)[-1]) == 7919


def test_li():
    assert li(10 ** 6) == pytest.approx(78627.549, abs=1e-2)
    with pytest.raises(ValueError):
        li(1.0)


# ==========================================
# Huecos
# ==========================================
def test_flujo_de_huecos_pequeno():
    assert list(gap_stream(10)) == [(2, 1), (3, 2), (5, 2)]
    with pytest.raises(ValueError):
        list(gap_stream(2))


def test_flujo_cruza_segmentos(monkeypatch):
    primos = sieve_segment(2, 5000)
    monkeypatch.setattr(params_primos, 'TAMANO_SEGMENTO', 50)
    flujo = list(gap_stream(5000))
    assert [p for p, _ in flujo] == primos[:-1].tolist()
    assert [d for _, d in flujo] == np.diff(primos).tolist()


def test_resumen_hasta_100():
    resumen = gap_summary(100)
    assert resumen.pi_x == 25
    assert resumen.avg_gap == pytest.approx(4.0)
    assert (resumen.max_record.p, resumen.max_record.gap) == (89, 8)
    assert resumen.cramer_stat == pytest.approx(8 / math.log(89) ** 2)
    assert resumen.cramer_stat == pytest.approx(0.397, abs=1e-3)
    assert resumen.como_dict()['max_gap'] == 8


def test_resumen_hasta_10():
    resumen = gap_summary(10)
    assert resumen.pi_x == 4
    assert resumen.max_record.gap == 2
    with pytest.raises(ValueError):
        gap_summary(9)


def test_records_conocidos():
    records = [(r.p, r.gap) for r in gap_records(10 ** 6)]
    assert records[:6] == [(2, 1), (3, 2), (7, 4), (23, 6), (89, 8), (113, 14)]
    assert records[-1] == (492113, 114)
    gaps = [g for _, g in records]
    assert all(a < b for a, b in zip(gaps, gaps[1:]))


def test_reporte_de_records():
    reporte = gap_record_report(10 ** 6)
    assert reporte['gap_sobre_log_maximo'] > 1.0
    # las formas iteradas sólo están definidas en alturas mucho mayores
    assert forma_rankin(10 ** 6) is None
    assert reporte['c_rankin_ajustada'] is None
    assert forma_rankin(1e9) is not None


def test_huecos_pequenos_y_conteo():
    filas = small_gap_report(10 ** 5)
    assert [f['decada'] for f in filas] == [0, 1, 2, 3, 4]
    assert all(f['minimo'] > 0 for f in filas)
    conteo = prime_count_report(10 ** 6)
    assert conteo['pi_x'] == 78498
    assert 0 < conteo['li_menos_pi'] < 200


def test_cotas_del_enesimo_primo():
    cotas = nth_prime_bounds(nth_primes(10 ** 4))
    assert 1.0 < cotas['a'] < cotas['b']
    assert cotas['b'] == pytest.approx(3 / (2 * math.log(2)))
    assert cotas['por_decada'][-1]['decada'] == 4


# ==========================================
# Rachas de compuestos
# ==========================================
def test_racha_factorial():
    assert composite_run_factorial(4) == (26, 3)
    inicio, longitud = composite_run_factorial(10)
    assert inicio == math.factorial(10) + 2 and longitud == 9
    with pytest.raises(ValueError):
        composite_run_factorial(21)
    with pytest.raises(ValueError):
        composite_run_factorial(1)


def test_racha_primorial():
    assert composite_run_primorial(1) == (4, 1)
    assert composite_run_primorial(3) == (32, 4)
    assert composite_run_primorial(4) == (212, 6)
    inicio, longitud = composite_run_primorial(5)
    assert all(not _es_primo(inicio + k) for k in range(longitud))
    with pytest.raises(ValueError):
        composite_run_primorial(16)


def test_reporte_de_rachas():
    filas = composite_run_report(6)
    tipos = {f['tipo'] for f in filas}
    assert tipos == {'factorial', 'primorial'}
    assert len(filas) == 5 + 6


# ==========================================
# Caché
# ==========================================
def test_cache_de_primos(tmp_path):
    cache = CachePrimos(str(tmp_path))
    assert not cache.existe()
    cache.registrar(1000)
    assert cache.leer() == 1000
    cache.registrar(500)
    assert cache.leer() == 1000
    (tmp_path / CachePrimos.NOMBRE).write_text("primecache v9 x_max=10\n", encoding='utf-8')
    with pytest.raises(ErrorVersionCache):
        cache.leer()


def test_conteo_hasta_mil_y_racha_minima():
    assert prime_pi(1000) == 168
    assert composite_run_factorial(2) == (4, 1)


def test_criba_contra_division_hasta_un_millon():
    pequenos = [d for d in range(2, 1001) if _es_primo(d)]
    candidatos = np.arange(2, 10 ** 6 + 1)
    primo = np.ones(len(candidatos), dtype=bool)
    for d in pequenos:
        primo &= (candidatos % d != 0) | (candidatos == d)
    assert np.array_equal(sieve_segment(2, 10 ** 6), candidatos[primo])


def test_suma_de_huecos_telescopica():
    assert sum(d for _, d in gap_stream(10 ** 6)) == 999983 - 2

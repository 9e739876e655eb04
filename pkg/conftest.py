"""Datos compartidos por las pruebas: las listas de ceros se calculan una sola vez."""
import logging

import pytest

from laboratorio.zeta_engine import find_zeros

logging.basicConfig(level=logging.INFO)


@pytest.fixture(scope='session')
def ceros_100():
    return find_zeros(0.0, 100.0)


@pytest.fixture(scope='session')
def ceros_2000():
    return find_zeros(0.0, 2000.0, hilos=4)


@pytest.fixture(scope='session')
def ceros_5000():
    return find_zeros(0.0, 5000.0, hilos=4)

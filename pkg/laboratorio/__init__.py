"""
Laboratorio de ceros de zeta, huecos entre primos y funciones L de Dirichlet.
"""

from .configuracion import NOMBRE_HERRAMIENTA, VERSION_HERRAMIENTA

__version__ = VERSION_HERRAMIENTA
__all__ = ['NOMBRE_HERRAMIENTA', '__version__']

"""
Línea de Comandos y Reportes
============================

Orquesta el laboratorio como herramienta de línea de comandos con
configuración reproducible, cachés persistentes y salidas CSV/JSON.

Códigos de salida: 0 éxito, 2 uso, 3 prerrequisito faltante,
4 fallo de verificación interna.
"""

import functools
import itertools
import logging
import math
import os
import sys
from typing import Any, Callable, Dict, List, Optional

import click
import numpy as np
import pandas as pd

from .configuracion import (
    VERSION_HERRAMIENTA, ErrorLaboratorio, ErrorPrerrequisito, ErrorVerificacion,
    configurar_logging, params_dirichlet, params_ejecucion, validar_parametros,
)
from . import dirichlet_engine as dirichlet
from . import duality_probe as dualidad
from . import prime_engine as primos
from . import salidas
from . import spacing_stats as espaciamiento
from . import zeta_engine as zeta

logger = logging.getLogger(__name__)

CODIGO_INTERNO = 4


# ==========================================
# 1. CONTEXTO Y UTILIDADES
# ==========================================
def directorio_cache(opcion: Optional[str]) -> str:
    """--cache-dir, luego la variable de entorno, luego ./.labzeta_cache."""
    if opcion:
        return opcion
    return os.environ.get(params_ejecucion.VARIABLE_CACHE, params_ejecucion.DIRECTORIO_CACHE)


def _validar(**kwargs) -> None:
    es_valido, mensaje = validar_parametros(**kwargs)
    if not es_valido:
        logger.warning(f"Parámetros inválidos: {mensaje}")
        raise click.UsageError(mensaje)


def _ejecutar(funcion: Callable) -> Callable:
    """Traduce errores del laboratorio a una línea `error codigo=N mensaje="..."`."""

    @functools.wraps(funcion)
    def envoltura(*args, **kwargs):
        try:
            return funcion(*args, **kwargs)
        except (click.ClickException, click.exceptions.Exit):
            raise
        except ErrorLaboratorio as e:
            click.echo(f'error codigo={e.codigo} mensaje="{e}"', err=True)
            sys.exit(e.codigo)
        except Exception as e:
            logger.error(f"Error inesperado: {e}")
            click.echo(f'error codigo={CODIGO_INTERNO} mensaje="{e}"', err=True)
            sys.exit(CODIGO_INTERNO)

    return envoltura


def _config(ctx: click.Context, comando: str, **parametros) -> Dict[str, Any]:
    config = {'comando': comando, 'semilla': ctx.obj['semilla'], 'formato': ctx.obj['formato']}
    config.update(parametros)
    return config


def _emitir_tabla(ctx: click.Context, df: pd.DataFrame, config: Dict[str, Any],
                  resumen: Optional[Dict] = None, ruta: Optional[str] = None) -> None:
    ruta = ruta if ruta is not None else ctx.obj['salida']
    if ctx.obj['formato'] == 'json':
        datos = {'filas': df.to_dict(orient='records')}
        if resumen is not None:
            datos['resumen'] = resumen
        salidas.emitir(salidas.documento_json(datos, config), ruta)
    else:
        salidas.emitir(salidas.tabla_csv(df, config), ruta)


def _ruta_derivada(ruta: Optional[str], sufijo: str) -> Optional[str]:
    if not ruta:
        return None
    base, _ = os.path.splitext(ruta)
    return f"{base}{sufijo}"


def _ceros_cacheados(ctx: click.Context, t_max: float) -> Optional[List[zeta.ZetaZero]]:
    cache = zeta.CacheCeros(ctx.obj['cache_dir'])
    if not cache.existe():
        return None
    _, cobertura, ceros = cache.leer()
    if cobertura < t_max:
        return None
    return [z for z in ceros if z.gamma < t_max]


def _x_primos_cacheado(ctx: click.Context, x_max: int) -> bool:
    cache = primos.CachePrimos(ctx.obj['cache_dir'])
    return cache.existe() and cache.leer() >= x_max


def _requerir(ctx: click.Context, t_max: Optional[float] = None, x_max: Optional[int] = None):
    """Devuelve los ceros cacheados; si falta alguna caché, lista los comandos a ejecutar."""
    faltan = []
    ceros = None
    if t_max is not None:
        ceros = _ceros_cacheados(ctx, t_max)
        if ceros is None:
            faltan.append('zeros')
    if x_max is not None and not _x_primos_cacheado(ctx, x_max):
        faltan.append('primes')
    if faltan:
        raise ErrorPrerrequisito(tuple(faltan))
    if ceros is not None and len(ceros) < 2:
        raise click.UsageError(f"--t-max {t_max} deja {len(ceros)} ceros; se requieren al menos 2")
    return ceros


# ==========================================
# 2. GRUPO PRINCIPAL
# ==========================================
@click.group()
@click.version_option(VERSION_HERRAMIENTA, prog_name='labzeta')
@click.option('--threads', 'hilos', type=int, default=params_ejecucion.HILOS, show_default=True,
              help='Máximo de hilos de trabajo.')
@click.option('--seed', 'semilla', type=int, default=params_ejecucion.SEMILLA, show_default=True)
@click.option('--output', '-o', 'salida', type=click.Path(dir_okay=False), default=None,
              help='Archivo de salida (stdout si se omite).')
@click.option('--format', 'formato', type=click.Choice(['csv', 'json']),
              default=params_ejecucion.FORMATO, show_default=True)
@click.option('--cache-dir', type=click.Path(file_okay=False), default=None,
              help=f'Directorio de cachés (o ${params_ejecucion.VARIABLE_CACHE}).')
@click.option('--verbose', '-v', is_flag=True, help='Logging en nivel DEBUG.')
@click.pass_context
def cli(ctx, hilos, semilla, salida, formato, cache_dir, verbose):
    """Laboratorio de ceros de zeta, huecos entre primos y dualidad."""
    configurar_logging(verbose)
    _validar(hilos=hilos)
    ctx.ensure_object(dict)
    ctx.obj.update({
        'hilos': hilos, 'semilla': semilla, 'salida': salida,
        'formato': formato, 'cache_dir': directorio_cache(cache_dir),
    })


# ==========================================
# 3. COMANDOS
# ==========================================
@cli.command()
@click.option('--t-max', type=float, default=params_ejecucion.T_MAX, show_default=True)
@click.option('--tol', type=float, default=params_ejecucion.TOLERANCIA, show_default=True)
@click.pass_context
@_ejecutar
def zeros(ctx, t_max, tol):
    """Ceros de Z(t) en [0, t-max) con verificación de conteo."""
    _validar(t_max=t_max, tol=tol)
    ceros = zeta.CacheCeros(ctx.obj['cache_dir']).extender(t_max, tol, ctx.obj['hilos'])
    ceros = [z for z in ceros if z.gamma < t_max]
    verificacion = zeta.verify_count(ceros, t_max)
    if not verificacion.complete:
        raise ErrorVerificacion(
            f"Conteo incompleto en T={t_max}: {verificacion.zeros_found} ceros, "
            f"esperados≈{verificacion.count_expected:.3f}"
        )
    df = pd.DataFrame({
        'n': [z.index for z in ceros],
        'gamma': [z.gamma for z in ceros],
        'uncertainty': [z.uncertainty for z in ceros],
    })
    config = _config(ctx, 'zeros', t_max=t_max, tol=tol)
    _emitir_tabla(ctx, df, config, resumen={
        'convencion': zeta.CONVENCION_Z,
        'verificacion': vars(verificacion),
    })


@cli.command()
@click.option('--x-max', type=int, default=params_ejecucion.X_MAX, show_default=True)
@click.pass_context
@_ejecutar
def primes(ctx, x_max):
    """Primos hasta x-max con el hueco al primo siguiente."""
    _validar(x_max=x_max)
    hilos = ctx.obj['hilos']
    lista = primos.sieve_segment(2, x_max, hilos)
    ancho = 64
    siguiente = primos.sieve_segment(x_max + 1, x_max + ancho)
    while len(siguiente) == 0:
        ancho *= 2
        siguiente = primos.sieve_segment(x_max + 1, x_max + ancho)
    huecos = np.diff(np.concatenate([lista, siguiente[:1]]))
    primos.CachePrimos(ctx.obj['cache_dir']).registrar(x_max)
    config = _config(ctx, 'primes', x_max=x_max)
    if ctx.obj['formato'] == 'json':
        salidas.emitir(salidas.documento_json(primos.gap_summary(x_max, hilos).como_dict(), config),
                       ctx.obj['salida'])
    else:
        _emitir_tabla(ctx, pd.DataFrame({'p': lista, 'gap': huecos}), config)


@cli.command()
@click.option('--t-max', type=float, default=params_ejecucion.T_MAX, show_default=True)
@click.pass_context
@_ejecutar
def spacings(ctx, t_max):
    """Espaciamientos normalizados desde la caché de ceros."""
    _validar(t_max=t_max)
    ceros = _requerir(ctx, t_max=t_max)
    muestras = espaciamiento.normalize_spacings(ceros)
    df = pd.DataFrame({
        'n': [s.n for s in muestras], 'gamma': [s.gamma_n for s in muestras],
        'raw': [s.raw for s in muestras], 'delta': [s.delta for s in muestras],
    })
    extremos = espaciamiento.extremes_report(muestras)
    resumen = {
        'extremos': {k: v for k, v in vars(extremos).items() if not k.endswith('corrientes')},
        'cotas': espaciamiento.spacing_bound_report(muestras),
    }
    _emitir_tabla(ctx, df, _config(ctx, 'spacings', t_max=t_max), resumen=resumen)


@cli.command()
@click.option('--t-max', type=float, default=params_ejecucion.T_MAX, show_default=True)
@click.option('--a', 'a', type=float, default=params_ejecucion.A_PAR, show_default=True)
@click.option('--b', 'b', type=float, default=params_ejecucion.B_PAR, show_default=True)
@click.option('--bins', type=int, default=params_ejecucion.BINS, show_default=True)
@click.option('--escala', type=click.Choice(['local', 'montgomery']), default='local', show_default=True)
@click.pass_context
@_ejecutar
def paircorr(ctx, t_max, a, b, bins, escala):
    """Correlación de pares por casillas frente a la referencia GUE."""
    _validar(t_max=t_max, bins=bins, a=a, b=b)
    ceros = _requerir(ctx, t_max=t_max)
    estimacion = espaciamiento.pair_correlation(ceros, a, b, t_max, bins, escala)
    df = pd.DataFrame({
        'a': [x.a for x in estimacion.bins], 'b': [x.b for x in estimacion.bins],
        'count': [x.count for x in estimacion.bins],
        'density': [x.normalized_density for x in estimacion.bins],
        'gue': [x.gue_density for x in estimacion.bins],
    })
    config = _config(ctx, 'paircorr', t_max=t_max, a=a, b=b, bins=bins, escala=escala)
    _emitir_tabla(ctx, df, config, resumen={'T': estimacion.T, 'zero_count': estimacion.zero_count})


@cli.command()
@click.option('--t-max', type=float, default=params_ejecucion.T_MAX, show_default=True)
@click.option('--n-lo', type=int, default=100, show_default=True)
@click.option('--n-hi', type=int, default=10 ** 4, show_default=True)
@click.option('--k', type=int, default=1, show_default=True)
@click.pass_context
@_ejecutar
def duality(ctx, t_max, n_lo, n_hi, k):
    """Barrido de transferencias de huecos primo↔cero."""
    _validar(t_max=t_max)
    if k < 1:
        raise click.UsageError("--k debe ser al menos 1")
    ceros = _requerir(ctx, t_max=t_max)
    sonda = dualidad.SondaDualidad(primos.nth_primes(len(ceros)), ceros)
    barrido = sonda.barrido(n_lo, n_hi, k)
    config = _config(ctx, 'duality', t_max=t_max, n_lo=n_lo, n_hi=n_hi, k=k)
    _emitir_tabla(ctx, barrido, config, resumen={
        'fracciones_por_decada': sonda.fracciones_por_decada(barrido),
        'cocientes_por_decada': sonda.cocientes_por_decada(n_lo, n_hi),
    })


@cli.command(name='dirichlet')
@click.option('--q', 'q', type=int, default=4, show_default=True)
@click.option('--a', 'a', type=int, default=1, show_default=True)
@click.option('--x-max', type=int, default=10 ** 6, show_default=True)
@click.option('--t-max-l', type=float, default=100.0, show_default=True)
@click.option('--tol', type=float, default=params_ejecucion.TOLERANCIA, show_default=True)
@click.pass_context
@_ejecutar
def dirichlet_cmd(ctx, q, a, x_max, t_max_l, tol):
    """Ceros de L(s, χ) de los caracteres primitivos y primos en a mod q."""
    _validar(x_max=x_max, tol=tol)
    if not 3 <= q <= params_dirichlet.MODULO_MAXIMO_CEROS:
        raise click.UsageError(f"--q debe estar entre 3 y {params_dirichlet.MODULO_MAXIMO_CEROS}")
    if not 0 < t_max_l <= params_dirichlet.ALTURA_MAXIMA_L:
        raise click.UsageError(f"--t-max-l debe estar entre 0 y {params_dirichlet.ALTURA_MAXIMA_L}")
    if math.gcd(a, q) != 1:
        raise click.UsageError(f"gcd({a}, {q}) = {math.gcd(a, q)}: --a y --q deben ser coprimos")
    config = _config(ctx, 'dirichlet', q=q, a=a, x_max=x_max, t_max_l=t_max_l, tol=tol)

    filas = []
    for chi in dirichlet.characters(q):
        if chi.principal or not chi.primitive:
            continue
        for z in dirichlet.find_l_zeros(chi, 0.0, t_max_l, tol):
            filas.append({'q': q, 'chi_index': chi.indice, 'n': z.index, 'gamma': z.gamma})
    ceros_l = pd.DataFrame(filas, columns=['q', 'chi_index', 'n', 'gamma'])

    try:
        resumen = dirichlet.ap_gap_summary(x_max, a, q, hilos=ctx.obj['hilos'])
    except ValueError as e:
        raise click.UsageError(str(e))
    _, lista = dirichlet.primes_in_ap(x_max, a, q, ctx.obj['hilos'])
    ancho = 64 * q
    siguiente = np.array([], dtype=np.int64)
    while len(siguiente) == 0:
        ventana = primos.sieve_segment(x_max + 1, x_max + ancho)
        siguiente = ventana[ventana % q == a % q]
        ancho *= 2
    ap = pd.DataFrame({
        'q': q, 'a': a % q, 'n': np.arange(1, len(lista) + 1), 'prime': lista,
        'gap': np.diff(np.concatenate([lista, siguiente[:1]])),
    })
    documento = {
        'ap': resumen.como_dict(),
        'primo_minimo': dirichlet.least_prime_sweep(q),
        'carrera': dirichlet.prime_race(x_max, q, ctx.obj['hilos']),
    }
    salida = ctx.obj['salida']
    _emitir_tabla(ctx, ceros_l, config)
    if salida:
        salidas.emitir(salidas.tabla_csv(ap, config), _ruta_derivada(salida, '.ap.csv'))
        salidas.emitir(salidas.documento_json(documento, config), _ruta_derivada(salida, '.resumen.json'))


@cli.command()
@click.option('--n', 'n', type=int, default=1000, show_default=True)
@click.option('--b', 'b', type=float, default=2.5, show_default=True)
@click.option('--t-max', type=float, default=params_ejecucion.T_MAX, show_default=True)
@click.option('--modo', type=click.Choice(['caminata', 'independiente']), default='caminata', show_default=True)
@click.pass_context
@_ejecutar
def probe(ctx, n, b, t_max, modo):
    """Sonda de caminata de Cauchy y reporte de |Z(t)|."""
    _validar(t_max=t_max)
    if n < 0:
        raise click.UsageError("--n no puede ser negativo")
    resultado = espaciamiento.cauchy_walk_probe(n, ctx.obj['semilla'], b, t_max, modo)
    config = _config(ctx, 'probe', n=n, b=b, t_max=t_max, modo=modo)
    df = pd.DataFrame([resultado._asdict()])
    _emitir_tabla(ctx, df, config, resumen={'modulo': zeta.modulus_report(1.0, t_max)})


@cli.command()
@click.option('--t-max', type=float, default=params_ejecucion.T_MAX, show_default=True)
@click.option('--x-max', type=int, default=params_ejecucion.X_MAX, show_default=True)
@click.option('--bins', type=int, default=params_ejecucion.BINS, show_default=True)
@click.pass_context
@_ejecutar
def report(ctx, t_max, x_max, bins):
    """Documento JSON consolidado desde las cachés de ceros y primos."""
    _validar(t_max=t_max, x_max=x_max, bins=bins)
    ceros = _requerir(ctx, t_max=t_max, x_max=x_max)
    documento = construir_reporte(ceros, t_max, x_max, bins, ctx.obj['semilla'], ctx.obj['hilos'])
    config = _config(ctx, 'report', t_max=t_max, x_max=x_max, bins=bins)
    salidas.emitir(salidas.documento_json(documento, config), ctx.obj['salida'])


# ==========================================
# 4. REPORTE CONSOLIDADO
# ==========================================
def construir_reporte(ceros: List[zeta.ZetaZero], t_max: float, x_max: int, bins: int,
                      semilla: int, hilos: int = 1) -> Dict[str, Any]:
    """Reúne todas las estadísticas en un documento con claves estables."""
    verificacion = zeta.verify_count(ceros, t_max)
    muestras = espaciamiento.normalize_spacings(ceros)
    extremos = espaciamiento.extremes_report(muestras)
    cotas = espaciamiento.spacing_bound_report(muestras)
    pares = espaciamiento.pair_correlation(ceros, params_ejecucion.A_PAR, params_ejecucion.B_PAR,
                                           t_max, bins)
    resumen_huecos = primos.gap_summary(x_max, hilos)
    poisson = espaciamiento.prime_gap_poisson(primos.gap_stream(x_max, hilos), x_max, [0.5, 1.0, 2.0])
    sonda = dualidad.SondaDualidad(primos.nth_primes(len(ceros)), ceros)
    barrido = sonda.barrido(100, len(ceros), 1)
    huecos = list(itertools.islice(primos.gap_stream(x_max, hilos), len(muestras)))
    cauchy = espaciamiento.cauchy_walk_probe(1000, semilla, 2.5, t_max)

    logger.info(f"Reporte consolidado: {len(ceros)} ceros, x={x_max}")
    return {
        'esquema': salidas.VERSION_ESQUEMA_REPORTE,
        'zero_count_verification': vars(verificacion),
        'mean_delta': extremos.media,
        'delta_extremes': {
            'min_delta': extremos.min_delta, 'min_index': extremos.min_index,
            'max_delta': extremos.max_delta, 'max_index': extremos.max_index,
            'c0_fitted': extremos.c0_ajustada, 'c1_fitted': extremos.c1_ajustada,
        },
        'spacing_lower_bound_violations': cotas['violaciones_inferior'],
        'spacing_upper_bound_exceedances': cotas['excedencias_superior'],
        'zero_separation_by_decade': cotas['separacion_por_decada'],
        'pair_correlation': [
            {'a': x.a, 'b': x.b, 'density': x.normalized_density, 'gue': x.gue_density}
            for x in pares.bins
        ],
        'pair_correlation_bins_within_0_1': int(np.count_nonzero(pares.desviaciones() < 0.1)),
        'form_factor_1_5': {
            'montgomery': espaciamiento.form_factor(ceros, 1.5, t_max),
            'conteo': espaciamiento.form_factor(ceros, 1.5, t_max, normalizacion='conteo'),
        },
        'prime_gap_summary': resumen_huecos.como_dict(),
        'prime_gap_poisson': [{'t': t, 'empirical': e, 'reference': r} for t, e, r in poisson],
        'duality_ratio_decades': sonda.cocientes_por_decada(2, len(ceros)),
        'duality_violation_decades': sonda.fracciones_por_decada(barrido),
        'gap_constant': sonda.gap_constant_probe(),
        'extreme_spacing_trend': {
            k: v for k, v in dualidad.extreme_spacing_probe(muestras, huecos).items()
            if k.startswith('decadas') or k == 'indices_solapados'
        },
        'cauchy_walk': cauchy._asdict(),
    }


def main() -> None:
    cli(obj={})

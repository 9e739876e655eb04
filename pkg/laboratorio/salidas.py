"""
Emisión de resultados: CSV y JSON con cabecera de procedencia,
escritura atómica (archivo temporal + os.replace).
"""

import hashlib
import json
import logging
import os
import tempfile
from typing import Any, Dict, Optional

import click
import numpy as np
import pandas as pd

from .configuracion import NOMBRE_HERRAMIENTA, VERSION_HERRAMIENTA, params_primos, params_zeta

logger = logging.getLogger(__name__)

VERSION_ESQUEMA_REPORTE = 1
# claves que no cambian el resultado y quedan fuera del hash
CLAVES_NO_HASH = ('hilos', 'threads', 'output', 'salida', 'verbose', 'cache_dir')


def hash_configuracion(config: Dict[str, Any]) -> str:
    """Hash estable (sha256, 16 hex) de la configuración efectiva."""
    efectiva = {k: v for k, v in config.items() if k not in CLAVES_NO_HASH}
    texto = json.dumps(efectiva, sort_keys=True, default=str)
    return hashlib.sha256(texto.encode('utf-8')).hexdigest()[:16]


def procedencia(config: Dict[str, Any]) -> Dict[str, Any]:
    return {
        'herramienta': NOMBRE_HERRAMIENTA,
        'version': VERSION_HERRAMIENTA,
        'config': hash_configuracion(config),
        'zerocache': params_zeta.VERSION_CACHE,
        'primecache': params_primos.VERSION_CACHE,
    }


def cabecera(config: Dict[str, Any]) -> str:
    """Línea de cabecera de los CSV: versión, hash de configuración y cachés."""
    p = procedencia(config)
    extras = " ".join(f"{k}={config[k]}" for k in ('t_max', 'x_max') if k in config)
    linea = (f"# {p['herramienta']} {p['version']} config={p['config']} "
             f"zerocache={p['zerocache']} primecache={p['primecache']}")
    return f"{linea} {extras}".rstrip()


def tabla_csv(df: pd.DataFrame, config: Dict[str, Any]) -> str:
    """CSV con 17 cifras significativas (ida y vuelta exacta)."""
    cuerpo = df.to_csv(index=False, float_format='%.17g', lineterminator='\n')
    return cabecera(config) + "\n" + cuerpo


def _a_json(valor: Any) -> Any:
    if isinstance(valor, dict):
        return {str(k): _a_json(v) for k, v in valor.items()}
    if isinstance(valor, (list, tuple)):
        return [_a_json(v) for v in valor]
    if isinstance(valor, np.generic):
        return valor.item()
    if isinstance(valor, np.ndarray):
        return [_a_json(v) for v in valor.tolist()]
    if isinstance(valor, float) and not np.isfinite(valor):
        return None
    return valor


def documento_json(datos: Dict[str, Any], config: Dict[str, Any]) -> str:
    """JSON con claves ordenadas; la procedencia va en la clave `procedencia`."""
    documento = dict(_a_json(datos))
    documento['procedencia'] = procedencia(config)
    return json.dumps(documento, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def escribir_atomico(ruta: str, contenido: str) -> None:
    """Escribe en un temporal del mismo directorio y lo renombra sobre `ruta`."""
    directorio = os.path.dirname(os.path.abspath(ruta))
    os.makedirs(directorio, exist_ok=True)
    descriptor, temporal = tempfile.mkstemp(dir=directorio, prefix='.tmp_', suffix='.part')
    try:
        with os.fdopen(descriptor, 'w', encoding='utf-8', newline='\n') as f:
            f.write(contenido)
        os.replace(temporal, ruta)
    except Exception:
        if os.path.exists(temporal):
            os.remove(temporal)
        raise
    logger.debug(f"Archivo escrito: {ruta}")


def emitir(contenido: str, ruta: Optional[str]) -> None:
    """Escribe `contenido` en `ruta` (atómico) o en stdout si no hay ruta."""
    if ruta:
        escribir_atomico(ruta, contenido)
    else:
        click.echo(contenido, nl=False)

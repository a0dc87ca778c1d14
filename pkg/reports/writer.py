"""
Gravação dos relatórios CSV e JSON
"""
import json
import logging
import os
import sys
from contextlib import contextmanager
from pathlib import Path

import pandas as pd

from config.settings import arredondar_float, formatar_float
from modules.errors import ReportIOError

logger = logging.getLogger(__name__)


@contextmanager
def abrir_saida(caminho=None):
    """Context manager para o destino do relatório.

    Arquivo: grava em `<caminho>.tmp` e renomeia ao final (commit); em erro o
    temporário é removido (rollback). `None` ou "-" usa a saída padrão.
    """
    if caminho is None or str(caminho) == "-":
        yield sys.stdout
        sys.stdout.flush()
        return

    destino = Path(caminho)
    temporario = destino.with_name(destino.name + ".tmp")
    try:
        destino.parent.mkdir(parents=True, exist_ok=True)
        arquivo = open(temporario, "w", encoding="utf-8", newline="")
    except OSError as e:
        raise ReportIOError(f"não foi possível abrir {destino}: {e}") from e

    try:
        with arquivo:
            yield arquivo
        os.replace(temporario, destino)
    except OSError as e:
        temporario.unlink(missing_ok=True)
        raise ReportIOError(f"falha ao gravar {destino}: {e}") from e
    except BaseException:
        temporario.unlink(missing_ok=True)
        raise


def _formatar_linha(linha: dict, colunas: list) -> dict:
    return {coluna: formatar_float(linha.get(coluna)) for coluna in colunas}


def render_csv(linhas: list, colunas: list, rodape: dict = None) -> str:
    """CSV com cabeçalho; floats com FLOAT_DIGITS algarismos significativos"""
    registros = [_formatar_linha(linha, colunas) for linha in linhas]
    if rodape is not None:
        registros.append(_formatar_linha(rodape, colunas))
    df = pd.DataFrame(registros, columns=colunas, dtype=object)
    return df.to_csv(index=False, lineterminator="\n")


def _nativo(valor):
    """Converte escalares numpy para tipos nativos"""
    if hasattr(valor, "item"):
        return valor.item()
    raise TypeError(f"tipo não serializável: {type(valor).__name__}")


def render_json(linhas: list, meta: dict) -> str:
    """Objeto único com `meta` e `rows`"""
    documento = {
        "meta": {chave: arredondar_float(valor) for chave, valor in meta.items()},
        "rows": [
            {chave: arredondar_float(valor) for chave, valor in linha.items()}
            for linha in linhas
        ],
    }
    return json.dumps(documento, indent=2, ensure_ascii=False, allow_nan=True,
                      default=_nativo) + "\n"


def gravar_relatorio(linhas: list, colunas: list, formato: str, meta: dict,
                     caminho=None, rodape: dict = None):
    """Renderiza e grava o relatório no destino"""
    if formato == "csv":
        texto = render_csv(linhas, colunas, rodape)
    elif formato == "json":
        registros = [{coluna: linha.get(coluna) for coluna in colunas} for linha in linhas]
        if rodape is not None:
            rodape_json = {chave: arredondar_float(valor) for chave, valor in rodape.items()}
            meta = {**meta, "footer": rodape_json}
        texto = render_json(registros, meta)
    else:
        raise ValueError(f"formato desconhecido: {formato}")

    with abrir_saida(caminho) as saida:
        saida.write(texto)
    logger.info("relatório %s gravado em %s (%d linhas)", formato, caminho or "stdout", len(linhas))

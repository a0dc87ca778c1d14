"""
Testes da gravação de relatórios
"""
import json

import numpy as np
import pytest

from modules.errors import ReportIOError
from reports.writer import abrir_saida, gravar_relatorio, render_csv, render_json


def test_csv_formata_numeros():
    linhas = [{"a": 1.0 / 3.0, "b": None, "c": True, "d": 7}]
    texto = render_csv(linhas, ["a", "b", "c", "d"])
    assert texto == "a,b,c,d\n0.3333333333,,true,7\n"


def test_csv_com_rodape():
    texto = render_csv([{"n": 0, "x": 1.5}], ["n", "x"], rodape={"n": "limite", "x": 2.0})
    assert texto.splitlines() == ["n,x", "0,1.5", "limite,2"]


def test_json_tem_meta_e_linhas():
    documento = json.loads(render_json([{"x": np.float64(0.1), "n": np.int64(2)}], {"v": "1"}))
    assert documento["meta"] == {"v": "1"}
    assert documento["rows"] == [{"x": 0.1, "n": 2}]


def test_gravacao_atomica(tmp_path):
    destino = tmp_path / "sub" / "saida.csv"
    gravar_relatorio([{"n": 1}], ["n"], "csv", {}, destino)
    assert destino.read_text(encoding="utf-8") == "n\n1\n"
    assert not (tmp_path / "sub" / "saida.csv.tmp").exists()


def test_rollback_em_erro(tmp_path):
    destino = tmp_path / "saida.csv"
    destino.write_text("anterior", encoding="utf-8")
    with pytest.raises(RuntimeError):
        with abrir_saida(destino) as saida:
            saida.write("parcial")
            raise RuntimeError("interrompido")
    assert destino.read_text(encoding="utf-8") == "anterior"
    assert not (tmp_path / "saida.csv.tmp").exists()


def test_diretorio_invalido(tmp_path):
    arquivo = tmp_path / "arquivo"
    arquivo.write_text("x", encoding="utf-8")
    with pytest.raises(ReportIOError):
        gravar_relatorio([{"n": 1}], ["n"], "csv", {}, arquivo / "saida.csv")


def test_formato_desconhecido():
    with pytest.raises(ValueError):
        gravar_relatorio([], ["n"], "xml", {})

"""
Testes da linha de comando
"""
import json
import math

import pytest

import app
from modules import cli


def _executar(capsys, *argumentos):
    codigo = app.main(list(argumentos))
    return codigo, capsys.readouterr()


def test_sequences_csv(capsys):
    codigo, saida = _executar(capsys, "sequences", "--n-max", "2")
    linhas = saida.out.strip().splitlines()
    assert codigo == 0
    assert len(linhas) == 5
    assert linhas[0] == "n,omega,chi,epsilon,tau,chi_residual"
    assert "1.772453851" in linhas[1]
    assert linhas[-1].startswith("-Z0(1/2),")
    assert "0.42772793" in linhas[-1]


def test_sequences_json(capsys):
    codigo, saida = _executar(capsys, "sequences", "--n-max", "1", "--format", "json")
    documento = json.loads(saida.out)
    assert codigo == 0
    assert documento["meta"]["command"] == "sequences"
    assert len(documento["rows"]) == 2
    assert documento["meta"]["footer"]["omega"] == pytest.approx(0.4277279327, abs=1e-9)


def test_opcao_desconhecida():
    with pytest.raises(SystemExit) as erro:
        app.main(["sequences", "--nao-existe"])
    assert erro.value.code == 2


def test_potencial_invalido(capsys):
    codigo, saida = _executar(capsys, "verify", "--potential", "box(k=-1,d=0.1)")
    assert codigo == 2
    assert "k" in saida.err


def test_n_max_negativo(capsys):
    codigo, _ = _executar(capsys, "sequences", "--n-max", "-1")
    assert codigo == 2


def test_saida_deterministica(tmp_path, capsys):
    caminho = tmp_path / "sequencias.json"
    conteudos = []
    for _ in range(2):
        assert app.main(["sequences", "--n-max", "5", "--format", "json",
                         "--out", str(caminho)]) == 0
        conteudos.append(caminho.read_bytes())
    assert conteudos[0] == conteudos[1]


def test_trace_oscilador_puro(capsys):
    codigo, saida = _executar(capsys, "trace", "--n-max", "3", "--format", "json")
    linhas = json.loads(saida.out)["rows"]
    assert codigo == 0
    assert len(linhas) == 4
    for linha in linhas:
        assert linha["regularized_sum"] == pytest.approx(0.0, abs=1e-9)
        assert linha["trace_target"] == 0.0


def test_trace_exige_q_nao_negativo(capsys):
    codigo, _ = _executar(capsys, "trace", "--potential", "meanzero(a=0.3)")
    assert codigo == 1


def test_verify_gaussiana(capsys):
    codigo, saida = _executar(capsys, "verify", "--potential", "gauss(a=1,s=1)",
                              "--n-max", "3", "--format", "json")
    linhas = json.loads(saida.out)["rows"]
    assert codigo == 0
    assert len(linhas) == 52
    assert [linha["theorem"] for linha in linhas[:4]] == ["thm31"] * 4
    assert {linha["verdict"] for linha in linhas} <= {"pass", "skipped"}
    media_zero = [linha for linha in linhas if linha["theorem"] == "powerzeromean"]
    assert all(linha["verdict"] == "skipped" for linha in media_zero)


def test_verify_media_zero(capsys):
    codigo, saida = _executar(capsys, "verify", "--potential", "meanzero(a=0.3)",
                              "--n-max", "2", "--s", "1", "--format", "json")
    linhas = json.loads(saida.out)["rows"]
    veredito = {}
    for linha in linhas:
        veredito.setdefault(linha["theorem"], set()).add(linha["verdict"])
    assert codigo == 0
    assert veredito["thm31"] == {"skipped"}
    assert veredito["thm41"] == {"pass"}
    assert veredito["powerzeromean"] == {"pass"}
    assert all(linha["note"].startswith("skipped: hypothesis")
               for linha in linhas if linha["theorem"] == "thm31")


def test_verify_media_zero_ate_n_10(capsys):
    codigo, saida = _executar(capsys, "verify", "--potential", "meanzero(a=0.3)",
                              "--n-max", "10", "--s", "1", "--format", "json")
    linhas = json.loads(saida.out)["rows"]
    assert codigo == 0
    assert all(linha["verdict"] != "error" for linha in linhas)


def test_verify_limite_dos_coeficientes(monkeypatch, capsys):
    monkeypatch.setattr(cli, "GENPOT_N_MAX", 1)
    codigo, saida = _executar(capsys, "verify", "--potential", "gauss(a=1,s=1)",
                              "--n-max", "2", "--s", "1", "--format", "json")
    linhas = [linha for linha in json.loads(saida.out)["rows"] if linha["theorem"] == "thm51"]
    assert codigo == 0
    assert [linha["verdict"] for linha in linhas] == ["pass", "pass", "skipped"]
    assert "fora do alcance" in linhas[-1]["note"]


def test_counterexample(capsys):
    codigo, saida = _executar(capsys, "counterexample", "--n", "0", "--N", "1",
                              "--format", "json")
    linha = json.loads(saida.out)["rows"][0]
    assert codigo == 0
    assert linha["theorem"] == "prop34"
    assert linha["K"] == pytest.approx(8.0 * math.pi, rel=1e-9)
    assert linha["regularized_sum"] <= -1.0


@pytest.mark.slow
def test_hermite_check(capsys):
    codigo, saida = _executar(capsys, "hermite-check")
    assert codigo == 0
    assert all(linha.endswith(",pass") for linha in saida.out.strip().splitlines()[1:])

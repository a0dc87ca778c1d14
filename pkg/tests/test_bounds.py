"""
Testes das desigualdades e do contraexemplo
"""
import logging
import math

import numpy as np
import pytest

from config.settings import S_PADRAO
from modules import bounds
from modules.bounds import (
    BoundReport,
    check_cor53,
    check_power1,
    check_power1a,
    check_powerzeromean,
    check_thm31,
    check_thm41,
    check_thm51,
    cor53_rhs,
    counterexample,
    odd_test_bound,
    power1_sides,
    power1a_sides,
    power_transform,
    rayleigh_regularized_bound,
    regularized_sum,
    thm51_rhs,
    verdict_tolerance,
)
from modules.errors import CounterexampleError, DomainError, HypothesisError
from modules.potentials import hermite_coefficients, integral, make_potential, scaled
from modules.sequences import chi, omega
from modules.solver import fd_oracle, solve_spectrum
from modules.special import z0

SQRT_PI = math.sqrt(math.pi)
N_TESTE = 6


def test_soma_regularizada_manual():
    lambdas = [1.5, 3.25, 5.0]
    esperado = 0.5 + 0.25 + 0.0 - 2.0 / math.pi * (1.0 + 3.0 ** -0.5 + 5.0 ** -0.5)
    assert regularized_sum(lambdas, 2.0, 2) == pytest.approx(esperado, abs=1e-14)
    with pytest.raises(DomainError):
        regularized_sum(lambdas, 2.0, 3)


def test_tolerancia_tem_piso(gauss):
    espectro = solve_spectrum(gauss, 3)
    assert verdict_tolerance(espectro, 2) >= 1e-8


@pytest.mark.parametrize("n", range(N_TESTE))
def test_thm31_cadeia_para_gaussiana(gauss, n):
    relatorio = check_thm31(gauss, n)
    assert relatorio.passed
    assert relatorio.direction == "<="
    assert relatorio.rhs == chi(n) * SQRT_PI / math.pi
    meio = relatorio.extras["chain_middle"]
    assert relatorio.lhs <= meio + relatorio.tolerance
    assert meio <= relatorio.rhs + 1e-10


def test_thm31_box_passa(box):
    espectro = solve_spectrum(box, 4)
    for n in range(4):
        assert check_thm31(box, n, spectrum=espectro).passed


def test_thm31_escala_linear_exata(gauss):
    base = check_thm31(gauss, 3)
    for t in (0.5, 0.25):
        relatorio = check_thm31(scaled(gauss, t), 3)
        assert relatorio.rhs == t * base.rhs
        assert math.isfinite(relatorio.slack)


def test_thm31_exige_q_nao_negativo(meanzero):
    with pytest.raises(HypothesisError):
        check_thm31(meanzero, 2)
    exploratorio = check_thm31(meanzero, 2, require_nonnegative=False)
    assert "exploratório" in exploratorio.note


def test_thm31_potencial_nulo():
    relatorio = check_thm31(None, 4)
    assert relatorio.lhs == pytest.approx(0.0, abs=1e-12)
    assert relatorio.rhs == 0.0
    assert relatorio.passed


@pytest.mark.parametrize("n", range(N_TESTE))
def test_thm41_q_indefinido(meanzero, n):
    relatorio = check_thm41(meanzero, n)
    assert relatorio.passed
    assert relatorio.inputs_digest["q_m"] == pytest.approx(0.3, abs=1e-9)


def test_thm41_coincide_com_thm31_para_q_positivo(gauss):
    assert check_thm41(gauss, 3).rhs == pytest.approx(check_thm31(gauss, 3).rhs, abs=1e-15)


@pytest.mark.parametrize("n", range(8))
def test_thm51_igualdade_no_oscilador_puro(n):
    coeficientes = hermite_coefficients(None, 2 * n, harmonic=True)
    assert thm51_rhs(coeficientes, n) == pytest.approx((n + 1) ** 2, rel=1e-12)


@pytest.mark.parametrize("q", ["gauss", "meanzero"])
def test_thm51_passa(q, gauss, meanzero):
    potencial = {"gauss": gauss, "meanzero": meanzero}[q]
    for n in range(N_TESTE):
        assert check_thm51(potencial, n).passed


@pytest.mark.parametrize("n", range(9))
def test_cor53_igual_a_cota_de_rayleigh(gauss, n):
    coeficientes = hermite_coefficients(gauss, 2 * n)
    assert cor53_rhs(coeficientes, integral(gauss), n) == pytest.approx(
        rayleigh_regularized_bound(gauss, n), abs=1e-9
    )


def test_cor53_domina_thm31(gauss):
    for n in range(N_TESTE):
        relatorio = check_cor53(gauss, n)
        assert relatorio.passed
        assert relatorio.extras["dominates_thm31"] is True


def test_cor53_q_indefinido(meanzero):
    relatorio = check_cor53(meanzero, 3)
    assert relatorio.passed
    assert relatorio.extras["dominates_thm31"] is None


@pytest.mark.parametrize("s", S_PADRAO)
def test_power1_passa(gauss, s):
    for n in range(N_TESTE):
        relatorio = check_power1(gauss, n, s)
        assert relatorio.passed
        assert relatorio.direction == ">="
        assert relatorio.s == s


def test_power1_s_pequeno_tende_a_um():
    lambdas = [1.2, 3.1, 5.05]
    lhs, rhs = power1_sides(lambdas, 1.0, 2, 1e-8)
    assert abs(lhs - 1.0) < 1e-6
    assert abs(rhs - 1.0) < 1e-6


def test_power1_lacuna_degenerada():
    with pytest.raises(HypothesisError):
        power1_sides([1.0, 3.5], 1.0, 1, 1.0)
    with pytest.raises(DomainError):
        power1_sides([1.5, 3.5], 1.0, 1, 0.0)


@pytest.mark.parametrize("s", S_PADRAO)
def test_power1a_passa(gauss, s):
    for n in range(N_TESTE):
        relatorio = check_power1a(gauss, n, s)
        assert relatorio.passed
        assert relatorio.extras["comparison_monotone"] is True


def test_power1a_sequencia_nao_monotona_avisa(caplog):
    lambdas = 2.0 * np.arange(4) + 1.0 + 0.5
    with caplog.at_level(logging.WARNING, logger="modules.bounds"):
        _, _, monotona = power1a_sides(lambdas, 10.0, 3, 1.0)
    assert monotona is False
    assert any("monótona" in registro.getMessage() for registro in caplog.records)


def test_power1a_integral_grande():
    with pytest.raises(HypothesisError):
        power1a_sides([2.0, 4.0], 32.0 * SQRT_PI, 1, 1.0)
    with pytest.raises(HypothesisError):
        check_power1a(make_potential("box", k=60.0, d=0.5), 1, 1.0)


@pytest.mark.parametrize("sharpened", [False, True])
def test_powerzeromean_passa(meanzero, sharpened):
    for n in range(N_TESTE):
        for s in S_PADRAO:
            assert check_powerzeromean(meanzero, n, s, sharpened=sharpened).passed


def test_powerzeromean_exige_media_zero(gauss):
    with pytest.raises(HypothesisError):
        check_powerzeromean(gauss, 1, 1.0)


def test_power_transform_igualdade():
    b = np.array([1.0, 3.0, 5.0])
    resultado = power_transform(b, b, b, 2, 1.5)
    assert resultado.lhs == pytest.approx(resultado.bound, rel=1e-14)
    assert resultado.holds


def test_power_transform_caso_geral():
    a = np.array([1.1, 2.9, 5.3])
    c = np.array([1.2, 3.0, 5.2])
    b = np.array([1.0, 3.0, 5.0])
    resultado = power_transform(a, b, c, 2, 0.5)
    assert resultado.holds
    assert resultado.lhs >= power_transform(a, c, c, 2, 0.5).bound - 1e-12


def test_power_transform_aleatorio(rng):
    for _ in range(1000):
        m = int(rng.integers(1, 9))
        a = rng.uniform(0.5, 10.0, m)
        folgas = rng.uniform(0.0, 1.0, m)
        c = a + np.diff(folgas, prepend=0.0)
        b = np.sort(rng.uniform(0.5, 10.0, m))
        s = float(rng.uniform(0.1, 3.0))
        assert power_transform(a, b, c, m - 1, s).holds


def test_power_transform_cota_maxima_em_b_igual_c():
    c = np.array([1.0, 3.2, 5.1, 7.4])
    otima = power_transform(c, c, c, 3, 1.0).bound
    for fator in (1.1, 0.9):
        assert power_transform(c, c * fator, c, 3, 1.0).bound < otima


def test_power1_igualdade_de_jensen():
    n, lacuna = 3, 0.7
    lambdas = 2.0 * np.arange(n + 1) + 1.0 + lacuna
    total = lacuna * (n + 1) * math.pi / omega(n)
    for s in S_PADRAO:
        lhs, rhs = power1_sides(lambdas, total, n, s)
        assert lhs == pytest.approx(rhs, rel=1e-13)


def test_power1a_igualdade_no_oscilador_puro():
    lambdas = 2.0 * np.arange(5) + 1.0
    lhs, rhs, monotona = power1a_sides(lambdas, 0.0, 4, 1.0)
    assert lhs == pytest.approx(rhs, rel=1e-15)
    assert monotona


@pytest.mark.parametrize("s", S_PADRAO)
def test_powerzeromean_sem_folga_no_oscilador_puro(s):
    relatorio = check_powerzeromean(None, 3, s)
    assert relatorio.slack == pytest.approx(0.0, abs=1e-10)
    assert relatorio.passed


def test_power_transform_hipoteses():
    with pytest.raises(HypothesisError):
        power_transform([1.0, 3.0], [3.0, 1.0], [1.0, 3.0], 1, 1.0)
    with pytest.raises(HypothesisError):
        power_transform([2.0, 3.0], [1.0, 3.0], [1.0, 3.0], 1, 1.0)
    with pytest.raises(HypothesisError):
        power_transform([-1.0, 3.0], [1.0, 3.0], [1.0, 3.0], 1, 1.0)


def test_relatorio_pulado():
    linha = BoundReport.skipped("thm31", "skipped: hypothesis", n=2).as_row()
    assert linha["verdict"] == "skipped"
    assert linha["lhs"] is None
    assert linha["digest"] == ""


def test_digest_deterministico(gauss):
    a = check_thm31(gauss, 2)
    b = check_thm31(gauss, 2)
    assert a.inputs_digest["sha256"] == b.inputs_digest["sha256"]
    assert len(a.inputs_digest["sha256"]) == 16


def test_contraexemplo_n0():
    q, relatorio = counterexample(0, 1.0)
    assert relatorio.extras["K"] == pytest.approx(8.0 * math.pi, rel=1e-12)
    assert relatorio.extras["K_min"] == pytest.approx(4.0 * math.pi, rel=1e-12)
    assert relatorio.passed
    assert relatorio.lhs <= -1.0
    assert relatorio.lhs <= relatorio.extras["odd_test_bound"] + 1e-9
    assert q.family == "box"
    assert q.param("d") == relatorio.extras["delta"]
    assert integral(q) == relatorio.extras["K"]


@pytest.mark.slow
def test_contraexemplo_n2():
    q, relatorio = counterexample(2, 10.0)
    assert q.param("k") > 0.0
    assert relatorio.passed
    assert relatorio.lhs <= -10.0


def test_cota_impar_no_oscilador_puro():
    q = make_potential("box", k=1e-300, d=1.0)
    assert odd_test_bound(q, 3) == pytest.approx(20.0, rel=1e-12)


def test_contraexemplo_falha_com_diagnostico(monkeypatch):
    monkeypatch.setattr(bounds, "K_SAFETY", 1e-3)
    monkeypatch.setattr(bounds, "DELTA_FLOOR_EXP", 2)
    with pytest.raises(CounterexampleError) as erro:
        counterexample(0, 1.0)
    diagnostico = erro.value.diagnostics
    assert diagnostico["delta"] == 0.25
    assert {"basis_size", "max_entry", "regularized_sum"} <= set(diagnostico)


def test_contraexemplo_n_invalido():
    with pytest.raises(DomainError):
        counterexample(-1, 1.0)
    with pytest.raises(DomainError):
        counterexample(0, 0.0)


# ==================== FAIXAS COMPLETAS ====================

PRESETS_POSITIVOS = [
    ("gauss", {"a": 1.0, "s": 1.0}),
    ("gauss", {"a": 2.0, "s": 0.5}),
    ("box", {"k": 1.0, "d": 0.1}),
    ("sech2", {"a": 1.0, "s": 1.0}),
]


@pytest.mark.slow
@pytest.mark.parametrize("familia, params", PRESETS_POSITIVOS)
def test_thm31_ate_n_30(familia, params):
    q = make_potential(familia, **params)
    espectro = solve_spectrum(q, 31)
    for n in range(31):
        relatorio = check_thm31(q, n, spectrum=espectro)
        assert relatorio.passed, f"{q} n={n}: folga {relatorio.slack:.3g}"
    if familia != "box":
        np.testing.assert_allclose(espectro.eigenvalues, fd_oracle(q, 31), rtol=0.0, atol=1e-5)


@pytest.mark.slow
@pytest.mark.parametrize("a", [0.3, 1.0])
def test_thm41_media_zero_ate_n_30(a):
    q = make_potential("meanzero", a=a)
    espectro = solve_spectrum(q, 31)
    for n in range(31):
        relatorio = check_thm41(q, n, spectrum=espectro)
        assert relatorio.passed, f"{q} n={n}: folga {relatorio.slack:.3g}"
        assert relatorio.inputs_digest["q_m"] == pytest.approx(a, abs=1e-9)


@pytest.mark.slow
@pytest.mark.parametrize(
    "familia, params",
    [
        ("gauss", {"a": 1.0, "s": 1.0}),
        ("box", {"k": 1.0, "d": 0.2}),
        ("sech2", {"a": 1.0, "s": 1.0}),
    ],
)
def test_thm51_e_cor53_ate_n_15(familia, params):
    q = make_potential(familia, **params)
    espectro = solve_spectrum(q, 16)
    for n in range(16):
        assert check_thm51(q, n, spectrum=espectro).passed
        cor53 = check_cor53(q, n, spectrum=espectro)
        assert cor53.passed
        assert cor53.rhs <= check_thm31(q, n, spectrum=espectro).rhs + 1e-8


@pytest.mark.slow
def test_thm51_media_zero_ate_n_15(meanzero):
    espectro = solve_spectrum(meanzero, 16)
    for n in range(16):
        assert check_thm51(meanzero, n, spectrum=espectro).passed
        assert check_cor53(meanzero, n, spectrum=espectro).passed


@pytest.mark.slow
@pytest.mark.parametrize(
    "familia, params, s",
    [("box", {"k": 1.0, "d": 0.1}, 1.0), ("gauss", {"a": 5.0, "s": 1.0}, 2.0)],
)
def test_potencias_ate_n_20(familia, params, s):
    q = make_potential(familia, **params)
    espectro = solve_spectrum(q, 21)
    for n in range(21):
        assert check_power1(q, n, s, spectrum=espectro).passed
        assert check_power1a(q, n, s, spectrum=espectro).passed


@pytest.mark.slow
@pytest.mark.parametrize("s", S_PADRAO)
def test_powerzeromean_ate_n_20(s):
    q = make_potential("meanzero", a=1.0)
    espectro = solve_spectrum(q, 21)
    for n in range(21):
        assert check_powerzeromean(q, n, s, spectrum=espectro).passed


@pytest.mark.slow
def test_soma_regularizada_do_box_converge_para_o_traco():
    q = make_potential("box", k=1.0, d=0.5)
    espectro = solve_spectrum(q, 41)
    total = integral(q)
    alvo = -z0(0.5) * total / math.pi
    somas = [regularized_sum(espectro.eigenvalues, total, n) for n in range(41)]
    for n, soma in enumerate(somas):
        assert soma <= chi(n) * total / math.pi + verdict_tolerance(espectro, n)
    distancias = np.abs(np.array(somas) - alvo)
    assert distancias[31:].mean() < 0.5 * distancias[:10].mean()

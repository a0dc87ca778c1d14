"""
Testes do resolvedor de Galerkin e do oráculo de diferenças finitas
"""
import numpy as np
import pytest

from modules.errors import DomainError, QuadratureError, ResolutionError
from modules.hermite import gauss_hermite_rule
from modules.potentials import make_potential
from modules.solver import (
    assemble,
    eigenvalues,
    fd_oracle,
    rayleigh_quotient,
    ritz_values,
    solve_spectrum,
    tail_correction,
)


def test_oscilador_puro_exato(zero):
    resultado = solve_spectrum(zero, 51, basis_size=120)
    np.testing.assert_allclose(resultado.eigenvalues, 2.0 * np.arange(51) + 1.0, atol=1e-12)
    assert resultado.basis_size == 120
    assert np.all(resultado.convergence_estimate < 1e-12)


def test_matriz_sem_perturbacao_diagonal():
    problema = assemble(None, 5)
    np.testing.assert_array_equal(problema.matrix, np.diag([1.0, 3.0, 5.0, 7.0, 9.0]))
    assert problema.quadrature is None


def test_matriz_simetrica(gauss, box):
    for q in (gauss, box):
        matriz = assemble(q, 30).matrix
        np.testing.assert_array_equal(matriz, matriz.T)


def test_diagonal_igual_ao_quociente_de_rayleigh(gauss):
    matriz = assemble(gauss, 10).matrix
    for k in (0, 3, 9):
        assert matriz[k, k] == pytest.approx(rayleigh_quotient(gauss, k), rel=1e-11)
    assert rayleigh_quotient(None, 3) == 7.0


def test_quociente_de_rayleigh_acima_do_fundamental(gauss):
    espectro = solve_spectrum(gauss, 1)
    assert rayleigh_quotient(gauss, 0) >= espectro.eigenvalues[0]


def test_deslocamento_constante(gauss):
    base = solve_spectrum(gauss, 5, basis_size=60)
    deslocado = solve_spectrum(gauss, 5, basis_size=60, shift=2.5)
    np.testing.assert_allclose(deslocado.eigenvalues, base.eigenvalues + 2.5, atol=1e-10)
    assert rayleigh_quotient(gauss, 2, shift=2.5) == pytest.approx(
        rayleigh_quotient(gauss, 2) + 2.5, abs=1e-12
    )


def test_valores_de_ritz_decrescem_com_a_base(gauss):
    pequena = ritz_values(assemble(gauss, 20).matrix)[:5]
    grande = ritz_values(assemble(gauss, 60).matrix)[:5]
    assert np.all(grande <= pequena + 1e-10)


def test_eigenvalues_estimativa_pela_base_dobrada(gauss):
    resultado = eigenvalues(assemble(gauss, 60), 4)
    assert len(resultado) == 4
    assert resultado.requested_count == 4
    assert np.all(resultado.convergence_estimate < 1e-8)


def test_duplicacao_automatica_converge(gauss):
    resultado = solve_spectrum(gauss, 11)
    assert resultado.initial_basis_size == 120
    assert resultado.basis_size >= 240
    assert resultado.convergence_estimate[-1] < 1e-8
    assert np.all(np.diff(resultado.eigenvalues) > 0.0)
    assert np.all(resultado.eigenvalues > 2.0 * np.arange(11) + 1.0)


def test_quantidade_maior_que_a_base(gauss):
    with pytest.raises(DomainError):
        solve_spectrum(gauss, 20, basis_size=10)
    with pytest.raises(DomainError):
        assemble(gauss, 0)


def test_quadratura_insuficiente(gauss):
    with pytest.raises(QuadratureError):
        assemble(gauss, 50, quadrature=gauss_hermite_rule(20))


def test_oraculo_oscilador_puro():
    np.testing.assert_allclose(fd_oracle(None, 4), [1.0, 3.0, 5.0, 7.0], atol=1e-6)


def test_oraculo_estrito_sinaliza_malha_grossa():
    with pytest.raises(ResolutionError):
        fd_oracle(None, 3, M=50, strict=True)


@pytest.mark.parametrize(
    "q",
    [make_potential("gauss", a=1.0, s=1.0), make_potential("gauss", a=-0.5, s=0.7),
     make_potential("sech2", a=0.4, s=1.5)],
)
def test_galerkin_confere_com_oraculo(q):
    galerkin = solve_spectrum(q, 5).eigenvalues
    np.testing.assert_allclose(galerkin, fd_oracle(q, 5), atol=1e-6)


@pytest.mark.slow
@pytest.mark.parametrize("d", [0.1, 0.5])
def test_galerkin_box_confere_com_oraculo(d):
    q = make_potential("box", k=1.0, d=d)
    resultado = solve_spectrum(q, 11)
    np.testing.assert_allclose(resultado.eigenvalues, fd_oracle(q, 11), atol=1e-4)
    assert np.all(resultado.convergence_estimate < 1e-4)


def test_correcao_de_cauda_abaixa_os_valores_de_ritz(box):
    problema = assemble(box, 60)
    ritz = ritz_values(problema.matrix)[:4]
    correcao, cauda = tail_correction(problema, ritz, degree=480)
    assert np.all(correcao < 0.0)
    assert np.all(cauda >= 0.0)
    refinado = ritz_values(assemble(box, 240).matrix)[:4]
    assert np.all(np.abs(ritz + correcao - refinado) < np.abs(ritz - refinado))


def test_correcao_de_cauda_sem_perturbacao():
    correcao, cauda = tail_correction(assemble(None, 10), [1.0, 3.0])
    np.testing.assert_array_equal(correcao, [0.0, 0.0])
    np.testing.assert_array_equal(cauda, [0.0, 0.0])


def test_estimativa_usa_a_regra_do_problema(gauss):
    regra = gauss_hermite_rule(90)
    resultado = eigenvalues(assemble(gauss, 30, quadrature=regra), 3)
    refinado = ritz_values(assemble(gauss, 60, quadrature=regra).matrix)[:3]
    np.testing.assert_allclose(
        resultado.convergence_estimate, np.abs(resultado.eigenvalues - refinado), atol=1e-14
    )

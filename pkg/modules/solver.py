"""
Módulo do Resolvedor Espectral
Galerkin na base de Hermite para -u'' + (x² + q) u e oráculo de diferenças finitas
"""
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from config.settings import (
    BASIS_TOL,
    ENTRY_WARN,
    FD_HALF_WIDTH,
    FD_POINTS,
    MAX_BASIS,
    MIN_BASIS,
    TAIL_DEGREE_FACTOR,
)
from modules.errors import DomainError, NumericalError, QuadratureError, ResolutionError
from modules.hermite import (
    QuadratureRule,
    gauss_hermite_rule,
    hermite_normalized_table,
    iter_hermite_normalized,
)
from modules.linalg import inverse_iteration, symmetric_eigenvalues
from modules.potentials import PotentialSpec, cell_average, evaluate, perturbation_rule

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GalerkinProblem:
    """Matriz de Galerkin ⟨ψ̃_j, (-d² + x² + q + c) ψ̃_k⟩, j, k < N"""
    basis_size: int
    perturbation: PotentialSpec
    quadrature: QuadratureRule
    matrix: np.ndarray
    shift: float = 0.0


@dataclass(frozen=True, eq=False)
class EigenResult:
    """Menores valores de Ritz e estimativa de convergência por autovalor"""
    eigenvalues: np.ndarray
    basis_size: int
    convergence_estimate: np.ndarray
    requested_count: int
    initial_basis_size: int = None

    def __len__(self) -> int:
        return len(self.eigenvalues)

# ==================== MONTAGEM ====================

def _nos_para(basis_size: int, quad_nodes: int = None):
    """Nós de Gauss–Hermite efetivos quando o usuário fixa quad_nodes"""
    if quad_nodes is None:
        return None
    return max(int(quad_nodes), basis_size + 10)


def assemble(perturbation: PotentialSpec, N: int, quadrature: QuadratureRule = None,
             shift: float = 0.0, quad_nodes: int = None) -> GalerkinProblem:
    """Monta a matriz de Galerkin N×N"""
    if int(N) != N or N < 1:
        raise DomainError(f"tamanho da base deve ser inteiro >= 1, recebido {N}")
    N = int(N)
    matriz = np.diag(2.0 * np.arange(N) + 1.0 + shift)

    regra = quadrature
    if perturbation is not None:
        if regra is None:
            regra = perturbation_rule(perturbation, N, _nos_para(N, quad_nodes))
        if regra.kind == "gauss_hermite" and len(regra) < N + 2:
            raise QuadratureError(
                f"{len(regra)} nós de Gauss–Hermite são insuficientes para a base N={N}"
            )
        tabela = hermite_normalized_table(N - 1, regra.nodes)
        pesos = regra.dx_weights * evaluate(perturbation, regra.nodes)
        bloco = (tabela * pesos) @ tabela.T
        matriz = matriz + 0.5 * (bloco + bloco.T)

    if not np.all(np.isfinite(matriz)):
        raise NumericalError(f"matriz de Galerkin com entradas não finitas (N={N})")
    maior = float(np.max(np.abs(matriz)))
    if maior > ENTRY_WARN:
        logger.warning("matriz de Galerkin mal condicionada: entrada %.3g (N=%d)", maior, N)
    return GalerkinProblem(
        basis_size=N,
        perturbation=perturbation,
        quadrature=regra,
        matrix=matriz,
        shift=float(shift),
    )


def ritz_values(matrix) -> np.ndarray:
    """Todos os valores de Ritz em ordem crescente"""
    return symmetric_eigenvalues(matrix)


@lru_cache(maxsize=128)
def _ritz_em(perturbation: PotentialSpec, N: int, quad_nodes: int, shift: float) -> np.ndarray:
    problema = assemble(perturbation, N, shift=shift, quad_nodes=quad_nodes)
    valores = ritz_values(problema.matrix)
    valores.flags.writeable = False
    logger.debug("valores de Ritz calculados para %s com N=%d", perturbation, N)
    return valores

# ==================== AUTOVALORES ====================

def _validar_contagem(count: int, N: int = None) -> int:
    if int(count) != count or count < 1:
        raise DomainError(f"quantidade de autovalores deve ser >= 1, recebido {count}")
    if N is not None and count > N:
        raise DomainError(f"não há {count} autovalores numa base de tamanho {N}")
    return int(count)


def eigenvalues(problem: GalerkinProblem, count: int) -> EigenResult:
    """Menores `count` valores de Ritz, com estimativa pela base de tamanho 2N"""
    count = _validar_contagem(count, problem.basis_size)
    atual = ritz_values(problem.matrix)
    N = problem.basis_size
    regra = problem.quadrature
    if regra is not None and regra.kind == "gauss_hermite" and len(regra) < 2 * N + 2:
        regra = gauss_hermite_rule(len(regra) + N)
    dobrado = assemble(problem.perturbation, 2 * N, quadrature=regra, shift=problem.shift)
    refinado = ritz_values(dobrado.matrix)
    return EigenResult(
        eigenvalues=atual[:count].copy(),
        basis_size=problem.basis_size,
        convergence_estimate=np.abs(atual[:count] - refinado[:count]),
        requested_count=count,
        initial_basis_size=problem.basis_size,
    )


def solve_spectrum(perturbation: PotentialSpec, count: int, basis_size: int = None,
                   quad_nodes: int = None, shift: float = 0.0, tol: float = BASIS_TOL,
                   max_basis: int = MAX_BASIS) -> EigenResult:
    """Autovalores λ_0..λ_{count-1}, dobrando a base até o último mudar menos que tol.

    Com `basis_size` fixo resolve só nesse tamanho e usa 2N para a estimativa
    (valores de Ritz puros, cotas superiores). Na duplicação automática, potenciais
    com saltos recebem a correção de cauda de `tail_correction`.
    """
    count = _validar_contagem(count)
    shift = float(shift)
    N = int(basis_size) if basis_size is not None else max(4 * count, MIN_BASIS)
    _validar_contagem(count, N)
    inicial = N

    while True:
        atual = _ritz_em(perturbation, N, _nos_para(N, quad_nodes), shift)
        refinado = _ritz_em(perturbation, 2 * N, _nos_para(2 * N, quad_nodes), shift)
        estimativa = np.abs(atual[:count] - refinado[:count])
        if basis_size is not None:
            return EigenResult(atual[:count].copy(), N, estimativa, count, inicial)
        if estimativa[-1] < tol or 4 * N > max_basis:
            break
        logger.debug("dobrando a base para %s: N=%d, variação %.3g", perturbation, 2 * N,
                     estimativa[-1])
        N *= 2

    if perturbation is not None and perturbation.has_jumps:
        grosso, _ = _ritz_corrigidos(perturbation, N, _nos_para(N, quad_nodes), shift, count)
        refinado, cauda = _ritz_corrigidos(
            perturbation, 2 * N, _nos_para(2 * N, quad_nodes), shift, count
        )
        estimativa = np.abs(grosso - refinado) + cauda
    if estimativa[-1] >= tol:
        logger.warning(
            "base limitada a %d sem convergência para %s: variação %.3g",
            2 * N, perturbation, estimativa[-1],
        )
    return EigenResult(refinado[:count].copy(), 2 * N, estimativa, count, inicial)


def tail_correction(problem: GalerkinProblem, ritz, degree: int = None) -> tuple:
    """Acoplamento de segunda ordem dos valores de Ritz com o complemento da base.

    Para θ_i com vetor de Ritz u_i devolve (correção, cauda), com
    correção_i = -Σ_{N<=j<M} ⟨ψ̃_j, q u_i⟩² / (2j + 1 + c - θ_i), M = degree.
    A cauda j >= M é estimada pela metade final da soma, que decai como
    j^{-5/2} quando q tem saltos.
    """
    N = problem.basis_size
    ritz = np.asarray(ritz, dtype=float)
    if problem.perturbation is None or ritz.size == 0:
        return np.zeros(ritz.size), np.zeros(ritz.size)
    M = int(degree) if degree is not None else TAIL_DEGREE_FACTOR * N
    if M <= N:
        raise DomainError(f"grau da cauda deve exceder a base N={N}, recebido {M}")

    vetores = inverse_iteration(problem.matrix, ritz)
    regra = perturbation_rule(problem.perturbation, M)
    base = hermite_normalized_table(N - 1, regra.nodes)
    carga = (vetores.T @ base) * (regra.dx_weights * evaluate(problem.perturbation, regra.nodes))
    soma = np.zeros(ritz.size)
    metade = np.zeros(ritz.size)
    inicio_metade = max(N, M // 2)
    for j, psi in iter_hermite_normalized(M - 1, regra.nodes):
        if j < N:
            continue
        termo = (carga @ psi) ** 2 / (2.0 * j + 1.0 + problem.shift - ritz)
        soma += termo
        if j >= inicio_metade:
            metade += termo
    return -soma, metade / (2.0 ** 1.5 - 1.0)


@lru_cache(maxsize=32)
def _ritz_corrigidos(perturbation: PotentialSpec, N: int, quad_nodes: int, shift: float,
                     count: int) -> tuple:
    problema = assemble(perturbation, N, shift=shift, quad_nodes=quad_nodes)
    valores = _ritz_em(perturbation, N, quad_nodes, shift)[:count]
    correcao, cauda = tail_correction(problema, valores)
    corrigidos = valores + correcao
    for arr in (corrigidos, cauda):
        arr.flags.writeable = False
    logger.debug("correção de cauda para %s com N=%d: até %.3g", perturbation, N,
                 float(np.max(np.abs(correcao))))
    return corrigidos, cauda


def rayleigh_quotient(perturbation: PotentialSpec, k: int, quadrature: QuadratureRule = None,
                      shift: float = 0.0) -> float:
    """⟨ψ̃_k, (-d² + x² + q + c) ψ̃_k⟩ = 2k + 1 + c + ∫ q ψ̃_k²"""
    if int(k) != k or k < 0:
        raise DomainError(f"índice deve ser inteiro >= 0, recebido {k}")
    k = int(k)
    valor = 2.0 * k + 1.0 + shift
    if perturbation is None:
        return valor
    regra = quadrature or perturbation_rule(perturbation, k + 1)
    psi = hermite_normalized_table(k, regra.nodes)[k]
    return valor + float(np.sum(regra.dx_weights * evaluate(perturbation, regra.nodes) * psi ** 2))

# ==================== ORÁCULO DE DIFERENÇAS FINITAS ====================

def _autovalores_malha(perturbation: PotentialSpec, count: int, L: float, M: int,
                       shift: float) -> np.ndarray:
    passo = 2.0 * L / (M + 1)
    x = -L + passo * np.arange(1, M + 1)
    potencial = x ** 2 + shift
    if perturbation is not None:
        potencial = potencial + cell_average(perturbation, x, passo)
    diagonal = 2.0 / passo ** 2 + potencial
    fora = np.full(M - 1, -1.0 / passo ** 2)
    return eigh_tridiagonal(
        diagonal, fora, eigvals_only=True, select="i", select_range=(0, count - 1)
    )


def fd_oracle(perturbation: PotentialSpec, count: int, L: float = FD_HALF_WIDTH,
              M: int = FD_POINTS, shift: float = 0.0, richardson: bool = True,
              tol: float = 1e-3, strict: bool = False) -> np.ndarray:
    """Diferenças centrais de segunda ordem em [-L, L] com Dirichlet nas pontas.

    Com `richardson`, extrapola entre M e 2M+1 pontos internos (passo exatamente
    pela metade). A variação entre as duas malhas acima de `tol` é sinalizada.
    """
    count = _validar_contagem(count, M)
    grossa = _autovalores_malha(perturbation, count, L, M, shift)
    if not richardson:
        return grossa
    fina = _autovalores_malha(perturbation, count, L, 2 * M + 1, shift)
    variacao = float(np.max(np.abs(fina - grossa)))
    if variacao > tol:
        mensagem = f"resolução insuficiente em [-{L}, {L}] com M={M}: variação {variacao:.3g}"
        if strict:
            raise ResolutionError(mensagem)
        logger.warning(mensagem)
    return (4.0 * fina - grossa) / 3.0

"""
Módulo de Sequências
ω_n, χ_n, ε_n, τ_n e verificações de monotonia e convexidade
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from modules.errors import DomainError, NumericalError
from modules.special import gamma_half_ratio, log_gamma_ratio, z0

logger = logging.getLogger(__name__)

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class SequenceTable:
    """Tabela das sequências para n = 0..n_max"""
    n: np.ndarray
    omega: np.ndarray
    chi: np.ndarray
    epsilon: np.ndarray
    tau: np.ndarray
    chi_residual: np.ndarray
    unperturbed_eigs: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        """Converte a tabela em DataFrame"""
        return pd.DataFrame({
            "n": self.n,
            "omega": self.omega,
            "chi": self.chi,
            "epsilon": self.epsilon,
            "tau": self.tau,
            "chi_residual": self.chi_residual,
            "unperturbed_eigs": self.unperturbed_eigs,
        })

    def rows(self) -> list:
        return self.to_frame().to_dict(orient="records")


@dataclass(frozen=True)
class SecondDifferenceCheck:
    """Mínimo de ω_{k+2} - 2ω_{k+1} + ω_k para k = 0..k_max"""
    minimum: float
    argmin: int
    expected: float
    even_terms_zero: bool

    @property
    def passed(self) -> bool:
        return self.even_terms_zero and abs(self.minimum - self.expected) <= 1e-12


class _SomaCompensada:
    """Acumulador de Neumaier para somas corridas"""

    def __init__(self):
        self.total = 0.0
        self.compensacao = 0.0

    def adicionar(self, valor: float):
        t = self.total + valor
        if abs(self.total) >= abs(valor):
            self.compensacao += (self.total - t) + valor
        else:
            self.compensacao += (valor - t) + self.total
        self.total = t

    @property
    def valor(self) -> float:
        return self.total + self.compensacao

# ==================== FUNÇÕES AUXILIARES ====================

def _validar_indice(n, minimo: int = 0) -> int:
    if int(n) != n or n < minimo:
        raise DomainError(f"índice deve ser inteiro >= {minimo}, recebido {n}")
    return int(n)


def _soma_inversa_impares(n: int) -> float:
    """Σ_{k=0}^n (2k+1)^{-1/2}"""
    k = np.arange(n + 1, dtype=float)
    return math.fsum((2.0 * k + 1.0) ** -0.5)


def _soma_inversa(inicio: int, fim: int) -> float:
    """Σ_{k=inicio}^{fim} k^{-1/2}"""
    if fim < inicio:
        return 0.0
    k = np.arange(inicio, fim + 1, dtype=float)
    return math.fsum(k ** -0.5)

# ==================== SEQUÊNCIAS ====================

def unperturbed_eigenvalue(k: int) -> int:
    """λ_k⁰ = 2k + 1"""
    return 2 * _validar_indice(k) + 1


def omega(n: int) -> float:
    """ω_n, com ω_{-1} = 0"""
    n = _validar_indice(n, minimo=-1)
    if n == -1:
        return 0.0
    razao = gamma_half_ratio((n + 1) / 2.0)
    if n % 2:
        return (2 * n + 3) / (n + 1.0) * razao
    return (n + 1) / razao


def chi(n: int) -> float:
    """χ_n = ω_n - Σ_{k=0}^n (2k+1)^{-1/2}"""
    n = _validar_indice(n)
    return omega(n) - _soma_inversa_impares(n)


def epsilon(n: int) -> float:
    """ε_n = ω_n - √2 Γ(n+3/2)/Γ(n+1), com ε_{-1} = 0"""
    n = _validar_indice(n, minimo=-1)
    if n == -1:
        return 0.0
    return omega(n) - math.sqrt(2.0) * gamma_half_ratio(n + 1.0)


def omega_increments(n: int) -> tuple:
    """Incrementos ω_{n+1}-ω_n, ω_{n+2}-ω_{n+1}, ω_{n+3}-ω_{n+2} para n par"""
    n = _validar_indice(n)
    if n % 2:
        raise DomainError(f"incrementos fechados só para n par, recebido {n}")
    c = omega(n)
    primeiro = c / (2.0 * (n + 2))
    return primeiro, primeiro, (n + 3) * c / (2.0 * (n + 2) * (n + 4))


def tau(n: int) -> float:
    """τ_n = ω_{n+1} - ω_n pelos incrementos fechados (τ_{2j} = τ_{2j+1} exatamente)"""
    n = _validar_indice(n)
    par = n - (n % 2)
    return omega(par) / (2.0 * (par + 2))


def chi_residual(n: int) -> float:
    """χ_n + Z₀(1/2), que tende a zero"""
    return chi(n) + z0(0.5)


def chi_split(n: int) -> tuple:
    """(ω_n, (1 - 1/√2) Σ_{k=1}^n k^{-1/2}, Σ_{k=n+1}^{2n+1} k^{-1/2}).

    χ_n = primeiro - segundo - terceiro: a soma sobre os ímpares até 2n+1 é a
    soma completa menos a soma sobre os pares.
    """
    n = _validar_indice(n)
    return (
        omega(n),
        (1.0 - 2.0 ** -0.5) * _soma_inversa(1, n),
        _soma_inversa(n + 1, 2 * n + 1),
    )


def tail_sum_bracket(n: int) -> tuple:
    """(∫_{n+1}^{2n+2} x^{-1/2}, Σ_{k=n+1}^{2n+1} k^{-1/2}, ∫_{n+1}^{2n+2} (x-1)^{-1/2})"""
    n = _validar_indice(n)
    inferior = 2.0 * (math.sqrt(2.0 * n + 2.0) - math.sqrt(n + 1.0))
    superior = 2.0 * (math.sqrt(2.0 * n + 1.0) - math.sqrt(float(n)))
    return inferior, _soma_inversa(n + 1, 2 * n + 1), superior


def gamma_sum_identity(n: int) -> tuple:
    """(Σ_{k=0}^n Γ(k+1/2)/Γ(k+1), 2Γ(n+3/2)/Γ(n+1))"""
    n = _validar_indice(n)
    termos = [math.exp(-log_gamma_ratio(k + 0.5, 0.5)) for k in range(n + 1)]
    return math.fsum(termos), 2.0 * gamma_half_ratio(n + 1.0)

# ==================== TABELA E VERIFICAÇÕES ====================

def sequence_table(n_max: int) -> SequenceTable:
    """Tabela de ω, χ, ε, τ para n = 0..n_max (n_max <= 10^6)"""
    n_max = _validar_indice(n_max)
    if n_max > 1_000_000:
        raise DomainError(f"n_max deve ser <= 10^6, recebido {n_max}")

    valores_omega = np.empty(n_max + 1)
    valores_chi = np.empty(n_max + 1)
    valores_eps = np.empty(n_max + 1)
    valores_tau = np.empty(n_max + 1)
    soma = _SomaCompensada()
    for n in range(n_max + 1):
        if n % 2 == 0:
            valores_omega[n] = omega(n)
            incremento = omega_increments(n)[0]
            valores_tau[n] = incremento
            if n + 1 <= n_max:
                direto = omega(n + 1)
                incremental = valores_omega[n] + incremento
                if abs(direto - incremental) > 1e-12 * direto:
                    raise NumericalError(
                        f"incremento fechado inconsistente em n={n}: {direto!r} != {incremental!r}"
                    )
                valores_omega[n + 1] = direto
        else:
            valores_tau[n] = valores_tau[n - 1]
        soma.adicionar((2.0 * n + 1.0) ** -0.5)
        valores_chi[n] = valores_omega[n] - soma.valor
        valores_eps[n] = valores_omega[n] - math.sqrt(2.0) * gamma_half_ratio(n + 1.0)

    logger.debug("tabela de sequências calculada até n=%d", n_max)
    indices = np.arange(n_max + 1)
    return SequenceTable(
        n=indices,
        omega=valores_omega,
        chi=valores_chi,
        epsilon=valores_eps,
        tau=valores_tau,
        chi_residual=valores_chi + z0(0.5),
        unperturbed_eigs=2 * indices + 1,
    )


def second_difference_bound_check(k_max: int = 1000) -> SecondDifferenceCheck:
    """Mínimo da segunda diferença de ω; esperado -√π/16 em k = 1"""
    k_max = _validar_indice(k_max, minimo=1)
    diferencas = np.array([tau(k + 1) - tau(k) for k in range(k_max + 1)])
    pares_nulos = bool(np.all(diferencas[0::2] == 0.0))
    posicao = int(np.argmin(diferencas))
    return SecondDifferenceCheck(
        minimum=float(diferencas[posicao]),
        argmin=posicao,
        expected=-_SQRT_PI / 16.0,
        even_terms_zero=pares_nulos,
    )

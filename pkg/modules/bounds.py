"""
Módulo de Desigualdades
Verificação numérica das cotas para somas de autovalores do oscilador harmônico perturbado
"""
import hashlib
import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from config.settings import (
    COUNTEREXAMPLE_BASIS,
    DELTA_FLOOR_EXP,
    K_SAFETY,
    TEOREMAS,
    VERDICT_TOL_FLOOR,
)
from modules.errors import CounterexampleError, DomainError, HypothesisError
from modules.hermite import hermite_normalized_table
from modules.potentials import (
    PotentialSpec,
    evaluate,
    hermite_coefficients,
    integral,
    is_nonnegative,
    make_potential,
    perturbation_rule,
    q_m,
    zero_potential,
)
from modules.sequences import chi, epsilon, omega, tau
from modules.solver import EigenResult, solve_spectrum
from modules.special import log_gamma

logger = logging.getLogger(__name__)

_SQRT_PI = math.sqrt(math.pi)
_LIMITE_POWER1A = 32.0 * _SQRT_PI


@dataclass(frozen=True)
class BoundReport:
    """Resultado de uma desigualdade para um (teorema, n, s)"""
    theorem_id: str
    n: int
    lhs: float
    rhs: float
    slack: float
    tolerance: float
    verdict: str
    direction: str
    s: float = None
    inputs_digest: dict = field(default_factory=dict, compare=False, hash=False)
    note: str = ""
    extras: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @classmethod
    def skipped(cls, theorem_id: str, reason: str, n: int = None, s: float = None):
        """Linha de hipótese não satisfeita (nunca omitida)"""
        return cls(
            theorem_id=theorem_id,
            n=n,
            lhs=None,
            rhs=None,
            slack=None,
            tolerance=None,
            verdict="skipped",
            direction=TEOREMAS[theorem_id]["direcao"],
            s=s,
            note=reason,
        )

    def as_row(self) -> dict:
        """Linha plana para relatórios"""
        return {
            "theorem": self.theorem_id,
            "n": self.n,
            "s": self.s,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "note": self.note,
            "digest": self.inputs_digest.get("sha256", ""),
        }


@dataclass(frozen=True)
class PowerTransformResult:
    """Σ a_k^{-s} e a cota Σ[(s+1) b_k^{-s} - s b_k^{-s-1} c_k]"""
    lhs: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.lhs >= self.bound - 1e-12 * max(1.0, abs(self.bound))

# ==================== FUNÇÕES AUXILIARES ====================

def _digest(**campos) -> dict:
    """Registro das entradas com hash sha256 da forma canônica"""
    canonico = json.dumps(campos, sort_keys=True, default=str)
    campos["sha256"] = hashlib.sha256(canonico.encode()).hexdigest()[:16]
    return campos


def _relatorio(teorema: str, n: int, lhs: float, rhs: float, tolerancia: float, digest: dict,
               s: float = None, note: str = "", extras: dict = None) -> BoundReport:
    direcao = TEOREMAS[teorema]["direcao"]
    folga = rhs - lhs if direcao == "<=" else lhs - rhs
    return BoundReport(
        theorem_id=teorema,
        n=n,
        lhs=lhs,
        rhs=rhs,
        slack=folga,
        tolerance=tolerancia,
        verdict="pass" if folga >= -tolerancia else "fail",
        direction=direcao,
        s=s,
        inputs_digest=digest,
        note=note,
        extras=extras or {},
    )


def _validar_n(n) -> int:
    if int(n) != n or n < 0:
        raise DomainError(f"n deve ser inteiro >= 0, recebido {n}")
    return int(n)


def _validar_s(s) -> float:
    s = float(s)
    if not s > 0.0:
        raise DomainError(f"s deve ser positivo, recebido {s}")
    return s


def _normalizar(q: PotentialSpec) -> PotentialSpec:
    return zero_potential() if q is None else q


def _espectro(q: PotentialSpec, n: int, spectrum: EigenResult = None,
              basis_size: int = None, quad_nodes: int = None) -> EigenResult:
    if spectrum is not None:
        if len(spectrum) < n + 1:
            raise DomainError(f"espectro com {len(spectrum)} autovalores; são necessários {n + 1}")
        return spectrum
    return solve_spectrum(q, n + 1, basis_size=basis_size, quad_nodes=quad_nodes)


def _digest_espectro(q: PotentialSpec, espectro: EigenResult, n: int, **extras) -> dict:
    return _digest(
        potential=str(q),
        basis_size=espectro.basis_size,
        convergence=float(np.max(espectro.convergence_estimate[:n + 1])),
        **extras,
    )


def verdict_tolerance(espectro: EigenResult, n: int) -> float:
    """max(piso, 2 Σ_{k<=n} estimativa_k)"""
    return max(VERDICT_TOL_FLOOR, 2.0 * math.fsum(espectro.convergence_estimate[:n + 1]))


def _tolerancia_potencia(valores: np.ndarray, espectro: EigenResult, n: int, s: float,
                         escala: float = 1.0) -> float:
    """Propagação da estimativa de convergência para Σ v_k^{-s}"""
    derivadas = s * valores ** (-s - 1.0) * espectro.convergence_estimate[:n + 1]
    return max(VERDICT_TOL_FLOOR, 2.0 * escala * math.fsum(derivadas))


def _log_fatorial(k: int) -> float:
    return 0.0 if k < 2 else log_gamma(k + 1.0)


def _log_fator_hermite(k: int, n: int) -> float:
    """ln[2^k (2k)!/k! · C(n+1, k+1)]"""
    return (
        k * math.log(2.0) + _log_fatorial(2 * k) - _log_fatorial(k)
        + _log_fatorial(n + 1) - _log_fatorial(k + 1) - _log_fatorial(n - k)
    )

# ==================== SOMAS REGULARIZADAS ====================

def regularized_sum(lambdas, q_integral: float, n: int) -> float:
    """Σ_{k<=n} [λ_k - (2k+1) - ∫q / (π √(2k+1))]"""
    n = _validar_n(n)
    valores = np.asarray(lambdas, dtype=float)
    if valores.size < n + 1:
        raise DomainError(f"são necessários {n + 1} autovalores, recebidos {valores.size}")
    k = np.arange(n + 1, dtype=float)
    termos = valores[:n + 1] - (2.0 * k + 1.0) - q_integral / (math.pi * np.sqrt(2.0 * k + 1.0))
    return math.fsum(termos)


def rayleigh_regularized_bound(q: PotentialSpec, n: int) -> float:
    """Σ_{k<=n} [∫ q ψ̃_k² - ∫q / (π √(2k+1))]: cota pelas funções teste ψ̃_0..ψ̃_n"""
    n = _validar_n(n)
    q = _normalizar(q)
    regra = perturbation_rule(q, n + 1)
    tabela = hermite_normalized_table(n, regra.nodes)
    diagonal = (tabela ** 2) @ (regra.dx_weights * evaluate(q, regra.nodes))
    k = np.arange(n + 1, dtype=float)
    return math.fsum(diagonal) - integral(q) / math.pi * math.fsum(1.0 / np.sqrt(2.0 * k + 1.0))


def odd_test_bound(q: PotentialSpec, n: int) -> float:
    """Cota da soma regularizada pelas funções teste ímpares ψ̃_1, ψ̃_3, .., ψ̃_{2n+1}"""
    n = _validar_n(n)
    regra = perturbation_rule(q, 2 * n + 2)
    tabela = hermite_normalized_table(2 * n + 1, regra.nodes)[1::2]
    diagonal = (tabela ** 2) @ (regra.dx_weights * evaluate(q, regra.nodes))
    k = np.arange(n + 1, dtype=float)
    constante = (n + 1) * (n + 2)
    return (
        constante + math.fsum(diagonal)
        - integral(q) / math.pi * math.fsum(1.0 / np.sqrt(2.0 * k + 1.0))
    )

# ==================== SOMAS DE AUTOVALORES ====================

def check_thm31(q: PotentialSpec, n: int, spectrum: EigenResult = None,
                require_nonnegative: bool = True, basis_size: int = None,
                quad_nodes: int = None) -> BoundReport:
    """Soma regularizada <= χ_n ∫q / π para q >= 0"""
    n = _validar_n(n)
    q = _normalizar(q)
    nao_negativo = is_nonnegative(q)
    if require_nonnegative and not nao_negativo:
        raise HypothesisError(f"{q} não é certificadamente não negativo")
    espectro = _espectro(q, n, spectrum, basis_size, quad_nodes)
    total = integral(q)
    lhs = regularized_sum(espectro.eigenvalues, total, n)
    rhs = chi(n) * total / math.pi
    meio = rayleigh_regularized_bound(q, n)
    return _relatorio(
        "thm31", n, lhs, rhs,
        verdict_tolerance(espectro, n),
        _digest_espectro(q, espectro, n),
        note="" if nao_negativo else "exploratório: q indefinido",
        extras={"chain_middle": meio},
    )


def check_thm41(q: PotentialSpec, n: int, spectrum: EigenResult = None,
                basis_size: int = None, quad_nodes: int = None) -> BoundReport:
    """Soma regularizada <= χ_n ∫q / π + ε_n q_m / √π"""
    n = _validar_n(n)
    q = _normalizar(q)
    qm = q_m(q)
    espectro = _espectro(q, n, spectrum, basis_size, quad_nodes)
    total = integral(q)
    lhs = regularized_sum(espectro.eigenvalues, total, n)
    rhs = chi(n) * total / math.pi + epsilon(n) * qm / _SQRT_PI
    return _relatorio(
        "thm41", n, lhs, rhs,
        verdict_tolerance(espectro, n),
        _digest_espectro(q, espectro, n, q_m=qm),
    )


def thm51_rhs(coefficients, n: int) -> float:
    """Σ_{k<=n} 2^k (2k)!/k! C(n+1,k+1) v_{2k} + (n+1)²/2"""
    n = _validar_n(n)
    valores = coefficients.values
    if len(valores) < 2 * n + 1:
        raise DomainError(f"são necessários coeficientes até o grau {2 * n}")
    termos = []
    for k in range(n + 1):
        v = float(valores[2 * k])
        if v != 0.0:
            termos.append(math.copysign(math.exp(_log_fator_hermite(k, n) + math.log(abs(v))), v))
    return math.fsum(termos) + (n + 1) ** 2 / 2.0


def cor53_rhs(coefficients, q_integral: float, n: int) -> float:
    """Σ_{k<=n} [2^k (2k)!/k! C(n+1,k+1) q_{2k} - ∫q / (π √(2k+1))]"""
    n = _validar_n(n)
    valores = coefficients.values
    if len(valores) < 2 * n + 1:
        raise DomainError(f"são necessários coeficientes até o grau {2 * n}")
    termos = []
    for k in range(n + 1):
        v = float(valores[2 * k])
        if v != 0.0:
            termos.append(math.copysign(math.exp(_log_fator_hermite(k, n) + math.log(abs(v))), v))
        termos.append(-q_integral / (math.pi * math.sqrt(2.0 * k + 1.0)))
    return math.fsum(termos)


def check_thm51(q: PotentialSpec, n: int, spectrum: EigenResult = None,
                basis_size: int = None, quad_nodes: int = None) -> BoundReport:
    """Σ λ_k <= cota pelos coeficientes pares de V = x² + q"""
    n = _validar_n(n)
    q = _normalizar(q)
    coeficientes = hermite_coefficients(q, 2 * n, harmonic=True, warn_tail=False)
    espectro = _espectro(q, n, spectrum, basis_size, quad_nodes)
    lhs = math.fsum(espectro.eigenvalues[:n + 1])
    rhs = thm51_rhs(coeficientes, n)
    return _relatorio(
        "thm51", n, lhs, rhs,
        verdict_tolerance(espectro, n),
        _digest_espectro(q, espectro, n, coefficient_tail=coeficientes.tail_estimate),
    )


def check_cor53(q: PotentialSpec, n: int, spectrum: EigenResult = None,
                basis_size: int = None, quad_nodes: int = None) -> BoundReport:
    """Soma regularizada <= cota pelos coeficientes pares de q"""
    n = _validar_n(n)
    q = _normalizar(q)
    coeficientes = hermite_coefficients(q, 2 * n, warn_tail=False)
    espectro = _espectro(q, n, spectrum, basis_size, quad_nodes)
    total = integral(q)
    lhs = regularized_sum(espectro.eigenvalues, total, n)
    rhs = cor53_rhs(coeficientes, total, n)
    domina = None
    if is_nonnegative(q):
        domina = rhs <= chi(n) * total / math.pi + VERDICT_TOL_FLOOR
    return _relatorio(
        "cor53", n, lhs, rhs,
        verdict_tolerance(espectro, n),
        _digest_espectro(q, espectro, n, coefficient_tail=coeficientes.tail_estimate),
        extras={"dominates_thm31": domina},
    )

# ==================== POTÊNCIAS NEGATIVAS ====================

def _autovalores_positivos(lambdas, n: int) -> np.ndarray:
    valores = np.asarray(lambdas, dtype=float)[:n + 1]
    if valores.size < n + 1:
        raise DomainError(f"são necessários {n + 1} autovalores")
    if np.any(valores <= 0.0):
        raise HypothesisError("autovalores devem ser positivos para potências negativas")
    return valores


def power1_sides(lambdas, q_integral: float, n: int, s: float) -> tuple:
    """(média de (λ_k - λ_k⁰)^{-s}, [ω_n ∫q / ((n+1) π)]^{-s})"""
    n, s = _validar_n(n), _validar_s(s)
    valores = np.asarray(lambdas, dtype=float)[:n + 1]
    lacunas = valores - (2.0 * np.arange(n + 1) + 1.0)
    if np.any(lacunas <= 0.0):
        raise HypothesisError("λ_k - λ_k⁰ deve ser estritamente positivo (caso degenerado)")
    if not q_integral > 0.0:
        raise HypothesisError("∫q deve ser positivo")
    lhs = math.fsum(lacunas ** (-s)) / (n + 1)
    rhs = (omega(n) * q_integral / ((n + 1) * math.pi)) ** (-s)
    return lhs, rhs


def check_power1(q: PotentialSpec, n: int, s: float, spectrum: EigenResult = None,
                 basis_size: int = None, quad_nodes: int = None) -> BoundReport:
    """(n+1)^{-1} Σ (λ_k - λ_k⁰)^{-s} >= [ω_n ∫q / ((n+1) π)]^{-s}"""
    n, s = _validar_n(n), _validar_s(s)
    q = _normalizar(q)
    if not is_nonnegative(q):
        raise HypothesisError(f"{q} não é certificadamente não negativo")
    espectro = _espectro(q, n, spectrum, basis_size, quad_nodes)
    lhs, rhs = power1_sides(espectro.eigenvalues, integral(q), n, s)
    lacunas = espectro.eigenvalues[:n + 1] - (2.0 * np.arange(n + 1) + 1.0)
    return _relatorio(
        "power1", n, lhs, rhs,
        _tolerancia_potencia(lacunas, espectro, n, s, escala=1.0 / (n + 1)),
        _digest_espectro(q, espectro, n, s=s),
        s=s,
    )


def _sequencia_comparacao(q_integral: float, n: int) -> np.ndarray:
    """λ_k⁰ + (ω_k - ω_{k-1}) ∫q / π"""
    incrementos = np.array([omega(0)] + [tau(k - 1) for k in range(1, n + 1)])
    return 2.0 * np.arange(n + 1) + 1.0 + incrementos * q_integral / math.pi


def power1a_sides(lambdas, q_integral: float, n: int, s: float) -> tuple:
    """(Σ λ_k^{-s}, Σ c_k^{-s}, c monótona) com c_k = λ_k⁰ + (ω_k - ω_{k-1}) ∫q/π"""
    n, s = _validar_n(n), _validar_s(s)
    if q_integral >= _LIMITE_POWER1A - 1e-8:
        raise HypothesisError(f"∫q = {q_integral:.6g} não é menor que 32√π")
    valores = _autovalores_positivos(lambdas, n)
    comparacao = _sequencia_comparacao(q_integral, n)
    if np.any(comparacao <= 0.0):
        raise HypothesisError("sequência de comparação não positiva")
    monotona = bool(np.all(np.diff(comparacao) >= 0.0))
    if not monotona:
        logger.warning("sequência de comparação não monótona para ∫q = %.6g", q_integral)
    return math.fsum(valores ** (-s)), math.fsum(comparacao ** (-s)), monotona


def check_power1a(q: PotentialSpec, n: int, s: float, spectrum: EigenResult = None,
                  basis_size: int = None, quad_nodes: int = None) -> BoundReport:
    """Σ λ_k^{-s} >= Σ [λ_k⁰ + (ω_k - ω_{k-1}) ∫q/π]^{-s} para ∫q < 32√π"""
    n, s = _validar_n(n), _validar_s(s)
    q = _normalizar(q)
    if not is_nonnegative(q):
        raise HypothesisError(f"{q} não é certificadamente não negativo")
    total = integral(q)
    if total >= _LIMITE_POWER1A - 1e-8:
        raise HypothesisError(f"∫q = {total:.6g} não é menor que 32√π")
    espectro = _espectro(q, n, spectrum, basis_size, quad_nodes)
    lhs, rhs, monotona = power1a_sides(espectro.eigenvalues, total, n, s)
    return _relatorio(
        "power1a", n, lhs, rhs,
        _tolerancia_potencia(espectro.eigenvalues[:n + 1], espectro, n, s),
        _digest_espectro(q, espectro, n, s=s),
        s=s,
        note="" if monotona else "sequência de comparação não monótona",
        extras={"comparison_monotone": monotona},
    )


def powerzeromean_sides(lambdas, qm: float, n: int, s: float, sharpened: bool = False) -> tuple:
    """(Σ λ_k^{-s}, Σ [(s+1) b_k^{-s} - s b_k^{-s-1} c_k]).

    Com b_k = λ_k⁰ e c_k = λ_k⁰ + q_m (ε_k - ε_{k-1}), em forma fechada
    Σ (λ_k⁰)^{-s} - s q_m Σ (λ_k⁰)^{-s-1} (ε_k - ε_{k-1}).
    """
    n, s = _validar_n(n), _validar_s(s)
    valores = _autovalores_positivos(lambdas, n)
    base = 2.0 * np.arange(n + 1) + 1.0
    eps = np.array([epsilon(k) for k in range(-1, n + 1)])
    coeficiente = qm / _SQRT_PI if sharpened else qm
    comparacao = base + coeficiente * np.diff(eps)
    rhs = math.fsum((s + 1.0) * base ** (-s) - s * base ** (-s - 1.0) * comparacao)
    return math.fsum(valores ** (-s)), rhs


def check_powerzeromean(q: PotentialSpec, n: int, s: float, spectrum: EigenResult = None,
                        sharpened: bool = False, basis_size: int = None,
                        quad_nodes: int = None) -> BoundReport:
    """Σ λ_k^{-s} >= Σ (λ_k⁰)^{-s} - s q_m Σ (λ_k⁰)^{-s-1} (ε_k - ε_{k-1}) para ∫q = 0"""
    n, s = _validar_n(n), _validar_s(s)
    q = _normalizar(q)
    total = integral(q)
    if abs(total) >= 1e-10:
        raise HypothesisError(f"∫q = {total:.3g} não é zero")
    qm = q_m(q)
    espectro = _espectro(q, n, spectrum, basis_size, quad_nodes)
    lhs, rhs = powerzeromean_sides(espectro.eigenvalues, qm, n, s, sharpened)
    return _relatorio(
        "powerzeromean", n, lhs, rhs,
        _tolerancia_potencia(espectro.eigenvalues[:n + 1], espectro, n, s),
        _digest_espectro(q, espectro, n, s=s, q_m=qm, sharpened=sharpened),
        s=s,
        note="constante q_m/√π" if sharpened else "",
    )


def power_transform(a, b, c, n: int, s: float) -> PowerTransformResult:
    """Σ a_k^{-s} >= Σ [(s+1) b_k^{-s} - s b_k^{-s-1} c_k] quando Σ_{k<=m} a_k <= Σ_{k<=m} c_k.

    Exige a, b positivas e b não decrescente; a cota é máxima para b = c.
    """
    n, s = _validar_n(n), _validar_s(s)
    a = np.asarray(a, dtype=float)[:n + 1]
    b = np.asarray(b, dtype=float)[:n + 1]
    c = np.asarray(c, dtype=float)[:n + 1]
    if min(a.size, b.size, c.size) < n + 1:
        raise DomainError(f"as sequências precisam de {n + 1} termos")
    if np.any(a <= 0.0) or np.any(b <= 0.0):
        raise HypothesisError("a e b devem ser positivas")
    if np.any(np.diff(b) < 0.0):
        k = int(np.argmax(np.diff(b) < 0.0))
        raise HypothesisError(f"b deve ser não decrescente (falha em k={k + 1})")
    folga = np.cumsum(c) - np.cumsum(a)
    escala = np.cumsum(np.abs(a) + np.abs(c))
    if np.any(folga < -1e-12 * escala):
        k = int(np.argmax(folga < -1e-12 * escala))
        raise HypothesisError(f"somas parciais de a excedem as de c em m={k}")
    lhs = math.fsum(a ** (-s))
    bound = math.fsum((s + 1.0) * b ** (-s) - s * b ** (-s - 1.0) * c)
    resultado = PowerTransformResult(lhs=lhs, bound=bound)
    if not resultado.holds:
        logger.error("transformação de potência violada: %.17g < %.17g", lhs, bound)
    return resultado

# ==================== CONTRAEXEMPLO ====================

def counterexample(n: int, N: float, basis_size: int = COUNTEREXAMPLE_BASIS) -> tuple:
    """Constrói q = box(K, δ) >= 0 com soma regularizada <= -N.

    Devolve (q, relatório); δ é dividido por 2 até o piso 2^-DELTA_FLOOR_EXP.
    """
    n = _validar_n(n)
    N = float(N)
    if not N > 0.0:
        raise DomainError(f"N deve ser positivo, recebido {N}")
    constante = (n + 1) * (n + 2)
    k = np.arange(n + 1, dtype=float)
    soma_inversa = math.fsum(1.0 / (math.pi * np.sqrt(2.0 * k + 1.0)))
    k_minimo = (constante + 1.0 + N) / soma_inversa
    amplitude = K_SAFETY * k_minimo
    tamanho = max(int(basis_size), n + 1)

    regularizada = None
    delta = None
    espectro = None
    for expoente in range(1, DELTA_FLOOR_EXP + 1):
        delta = 2.0 ** -expoente
        q = make_potential("box", k=amplitude, d=delta)
        espectro = solve_spectrum(q, n + 1, basis_size=tamanho)
        regularizada = regularized_sum(espectro.eigenvalues, amplitude, n)
        logger.debug("contraexemplo n=%d: δ=2^-%d, soma regularizada %.6g", n, expoente,
                     regularizada)
        if regularizada <= -N:
            return q, _relatorio(
                "prop34", n, regularizada, -N, 0.0,
                _digest(potential=str(q), basis_size=espectro.basis_size, K=amplitude,
                        K_min=k_minimo, delta=delta, N=N),
                extras={
                    "K": amplitude,
                    "K_min": k_minimo,
                    "delta": delta,
                    "N": N,
                    "odd_test_bound": odd_test_bound(q, n),
                },
            )

    raise CounterexampleError(
        f"piso δ = 2^-{DELTA_FLOOR_EXP} atingido sem soma regularizada <= -{N}",
        diagnostics={
            "delta": delta,
            "basis_size": tamanho,
            "max_entry": amplitude / delta,
            "regularized_sum": regularizada,
            "K": amplitude,
        },
    )

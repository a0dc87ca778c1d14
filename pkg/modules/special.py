"""
Módulo de Funções Especiais
log-gama, razão de gamas em meio-inteiros, zeta de Riemann e funções associadas
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from config.settings import ZETA_MIN_INDEX, ZETA_TOL
from modules.errors import DomainError

logger = logging.getLogger(__name__)

# Coeficientes B_2k / (2k(2k-1)) da série de Stirling
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_LIMIAR_STIRLING = 10.0
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ZetaValue:
    """Valor de zeta(s) com cota rigorosa do erro de truncamento"""
    value: float
    abs_error_bound: float
    truncation_index: int
    cutoff: int

# ==================== FUNÇÕES AUXILIARES ====================

def _validar_real(valor, nome: str) -> float:
    """Converte para float e rejeita NaN"""
    try:
        numero = float(valor)
    except (TypeError, ValueError):
        raise DomainError(f"{nome} deve ser real, recebido {valor!r}")
    if math.isnan(numero):
        raise DomainError(f"{nome} não pode ser NaN")
    return numero


def _correcao_stirling(z: float) -> float:
    """Soma dos termos de Bernoulli da série assintótica de log-gama"""
    inverso = 1.0 / z
    quadrado = inverso * inverso
    potencia = inverso
    total = 0.0
    for coef in _STIRLING:
        total += coef * potencia
        potencia *= quadrado
    return total


def _log_gamma_assintotica(z: float) -> float:
    return (z - 0.5) * math.log(z) - z + _LOG_SQRT_2PI + _correcao_stirling(z)

# ==================== LOG-GAMA ====================

def log_gamma(z) -> float:
    """ln Γ(z) para z > 0 (Stirling com deslocamento ascendente abaixo de 10)"""
    z = _validar_real(z, "z")
    if z <= 0.0:
        raise DomainError(f"log_gamma exige z > 0, recebido {z}")
    if math.isinf(z):
        return math.inf
    if z >= _LIMIAR_STIRLING:
        return _log_gamma_assintotica(z)
    passos = math.ceil(_LIMIAR_STIRLING - z)
    return _log_gamma_assintotica(z + passos) - math.fsum(
        math.log(z + j) for j in range(passos)
    )


def log_gamma_ratio(z, a: float) -> float:
    """ln[Γ(z+a)/Γ(z)] sem cancelamento entre dois log-gamas grandes"""
    z = _validar_real(z, "z")
    a = _validar_real(a, "a")
    if z <= 0.0 or z + a <= 0.0:
        raise DomainError(f"log_gamma_ratio exige z > 0 e z + a > 0, recebido z={z}, a={a}")
    menor = min(z, z + a)
    if menor >= _LIMIAR_STIRLING:
        return (
            (z - 0.5) * math.log1p(a / z)
            + a * math.log(z + a)
            - a
            + (_correcao_stirling(z + a) - _correcao_stirling(z))
        )
    passos = math.ceil(_LIMIAR_STIRLING - menor)
    return log_gamma_ratio(z + passos, a) - math.fsum(
        math.log1p(a / (z + j)) for j in range(passos)
    )


def gamma_half_ratio(z) -> float:
    """Γ(z + 1/2) / Γ(z)"""
    z = _validar_real(z, "z")
    if z <= 0.0:
        raise DomainError(f"gamma_half_ratio exige z > 0, recebido {z}")
    return math.exp(log_gamma_ratio(z, 0.5))

# ==================== ZETA ====================

def _indice_corte(s: float, tol: float) -> int:
    """Menor M com s / (12 M^(s+1)) <= tol"""
    return int(math.ceil((s / (12.0 * tol)) ** (1.0 / (s + 1.0))))


@lru_cache(maxsize=64)
def zeta(s, n: int = None, cutoff: int = None, tol: float = ZETA_TOL) -> ZetaValue:
    """ζ(s) pela fórmula de Euler–Maclaurin com a integral do núcleo periódico.

    A integral s ∫_n^∞ (⌊x⌋ - x + 1/2) x^(-s-1) dx é somada exatamente em cada
    intervalo unitário até o corte M; o resto além de M recebe o termo principal
    s / (12 M^(s+1)) e fica limitado por esse mesmo valor.
    """
    s = _validar_real(s, "s")
    if s <= 0.0:
        raise DomainError(f"zeta exige s > 0, recebido {s}")
    if s == 1.0:
        raise DomainError("zeta tem um polo em s = 1")
    if tol <= 0.0:
        raise DomainError("tol deve ser positiva")

    n = ZETA_MIN_INDEX if n is None else int(n)
    if n < 1:
        raise DomainError(f"índice de truncamento deve ser >= 1, recebido {n}")
    if cutoff is None:
        cutoff = max(n + 1, _indice_corte(s, tol))
    cutoff = int(cutoff)
    if cutoff < n:
        raise DomainError(f"corte M={cutoff} menor que o índice n={n}")

    k = np.arange(1, n + 1, dtype=float)
    parcial = math.fsum(k ** (-s))
    continuo = n ** (1.0 - s) / (s - 1.0) - 0.5 * n ** (-s)

    m = np.arange(n, cutoff, dtype=float)
    passo = np.log1p(1.0 / m)
    m_s = m ** (-s)
    primeira = (m + 0.5) * (-m_s * np.expm1(-s * passo)) / s
    segunda = m ** (1.0 - s) * np.expm1((1.0 - s) * passo) / (1.0 - s)
    integral = s * math.fsum(primeira - segunda)

    cauda = s / (12.0 * cutoff ** (s + 1.0))
    valor = parcial + integral + continuo + cauda
    arredondamento = 8.0 * _EPS * (
        abs(parcial) + abs(continuo) + s * math.fsum(np.abs(primeira)) + 1.0
    )
    logger.debug("zeta(%g): n=%d, M=%d, cauda=%.3g", s, n, cutoff, cauda)
    return ZetaValue(
        value=valor,
        abs_error_bound=cauda + arredondamento,
        truncation_index=n,
        cutoff=cutoff,
    )


def z0(s) -> float:
    """Z₀(s) = (1 - 2^(-s)) ζ(s)"""
    s = _validar_real(s, "s")
    fator = -math.expm1(-s * math.log(2.0))
    return fator * zeta(s).value


def a_n(n: int) -> float:
    """a_n = 2√n - Σ_{k=1}^n k^(-1/2)"""
    if int(n) != n or n < 1:
        raise DomainError(f"a_n exige inteiro n >= 1, recebido {n}")
    n = int(n)
    k = np.arange(1, n + 1, dtype=float)
    return 2.0 * math.sqrt(n) - math.fsum(k ** -0.5)

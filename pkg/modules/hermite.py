"""
Módulo de Hermite
Polinômios de Hermite, funções de Hermite normalizadas, quadraturas e identidades
"""
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from config.settings import (
    ADAPTIVE_MAX_LEVELS,
    ADAPTIVE_RTOL,
    GL_ORDER,
    HERMITE_RAW_MAX_DEGREE,
    QUAD_MONOMIAL_DEGREE,
    QUAD_MONOMIAL_RTOL,
    QUAD_MONOMIAL_RTOL_LARGE,
)
from modules.errors import (
    ConvergenceError,
    DegreeTooLargeError,
    DomainError,
    QuadratureError,
    RangeOverflowError,
)
from modules.linalg import tridiagonal_ql
from modules.special import log_gamma

logger = logging.getLogger(__name__)

_PI_MENOS_QUARTO = math.pi ** -0.25
_LOG_SQRT_PI = 0.5 * math.log(math.pi)
_LOG_MAX = math.log(np.finfo(float).max)
_REESCALA = 1e150


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Regra de quadratura imutável.

    `weights` integra contra a medida da regra (e^{-x²} para Gauss–Hermite,
    dx para Gauss–Legendre composta). `scaled_weights` são os pesos para a
    medida dx: w·e^{x²} no caso Gauss–Hermite, calculados pela função de
    Christoffel para não sofrer underflow.
    """
    kind: str
    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple
    scaled_weights: np.ndarray

    @property
    def dx_weights(self) -> np.ndarray:
        """Pesos para ∫ f(x) dx"""
        return self.scaled_weights

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class IdentityCheck:
    """Resultado de uma identidade verificada numericamente"""
    name: str
    max_residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.max_residual < self.threshold)

# ==================== FUNÇÕES AUXILIARES ====================

def _como_array(x):
    """Converte a entrada em array 1-D e informa se era escalar"""
    arr = np.asarray(x, dtype=float)
    return np.atleast_1d(arr).ravel(), arr.ndim == 0


def _saida(valores: np.ndarray, escalar: bool):
    return float(valores[0]) if escalar else valores


def _validar_grau(n) -> int:
    if int(n) != n or n < 0:
        raise DomainError(f"grau deve ser inteiro >= 0, recebido {n}")
    return int(n)


def _log_fatorial(k: int) -> float:
    return 0.0 if k < 2 else log_gamma(k + 1.0)


def log_hermite_norm(k: int) -> float:
    """ln ‖H_k‖ = ½ ln(√π 2^k k!) no espaço L²(e^{-x²})"""
    return 0.5 * (_LOG_SQRT_PI + k * math.log(2.0) + _log_fatorial(k))


def _recorrencia_normalizada(n_max: int, x: np.ndarray, com_peso: bool = True):
    """Percorre ψ̃_0 .. ψ̃_{n_max} guardando o fator de escala em log.

    Gera (k, mantissa, log_escala) com ψ̃_k(x) = mantissa·exp(log_escala);
    sem peso, omite o fator e^{-x²/2}.
    """
    log_escala = -0.5 * x * x if com_peso else np.zeros_like(x)
    anterior = np.zeros_like(x)
    atual = np.full_like(x, _PI_MENOS_QUARTO)
    yield 0, atual, log_escala
    for k in range(n_max):
        proximo = x * math.sqrt(2.0 / (k + 1)) * atual - math.sqrt(k / (k + 1.0)) * anterior
        anterior, atual = atual, proximo
        grande = np.abs(atual) > _REESCALA
        if np.any(grande):
            fator = np.where(grande, np.abs(atual), 1.0)
            atual = atual / fator
            anterior = anterior / fator
            log_escala = log_escala + np.log(fator)
        yield k + 1, atual, log_escala


def _reconstruir(mantissa: np.ndarray, log_escala: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", over="ignore"):
        return np.where(
            mantissa == 0.0,
            0.0,
            np.sign(mantissa) * np.exp(log_escala + np.log(np.abs(mantissa))),
        )


def _log_abs(mantissa: np.ndarray, log_escala: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return log_escala + np.log(np.abs(mantissa))

# ==================== POLINÔMIOS E FUNÇÕES DE HERMITE ====================

def hermite_physicists(n: int, x):
    """H_n(x) pela recorrência de três termos (n <= 150)"""
    n = _validar_grau(n)
    if n > HERMITE_RAW_MAX_DEGREE:
        raise DegreeTooLargeError(
            f"H_n sem normalização só até n = {HERMITE_RAW_MAX_DEGREE}; use hermite_normalized"
        )
    return _saida(hermite_physicists_table(n, x)[n], _como_array(x)[1])


def hermite_physicists_table(n_max: int, x) -> np.ndarray:
    """Tabela H_0 .. H_{n_max} nos pontos x, formato (n_max+1, len(x))"""
    n_max = _validar_grau(n_max)
    if n_max > HERMITE_RAW_MAX_DEGREE:
        raise DegreeTooLargeError(f"grau {n_max} acima de {HERMITE_RAW_MAX_DEGREE}")
    pontos, _ = _como_array(x)
    tabela = np.empty((n_max + 1, pontos.size))
    tabela[0] = 1.0
    if n_max >= 1:
        tabela[1] = 2.0 * pontos
    for k in range(1, n_max):
        tabela[k + 1] = 2.0 * pontos * tabela[k] - 2.0 * k * tabela[k - 1]
    return tabela


def hermite_normalized(n: int, x):
    """ψ̃_n(x) = H_n(x) e^{-x²/2} / √(2^n n! √π), estável para n grande"""
    n = _validar_grau(n)
    pontos, escalar = _como_array(x)
    for _, mantissa, log_escala in _recorrencia_normalizada(n, pontos):
        pass
    return _saida(_reconstruir(mantissa, log_escala), escalar)


def hermite_normalized_table(n_max: int, x, com_peso: bool = True) -> np.ndarray:
    """Tabela ψ̃_0 .. ψ̃_{n_max} nos pontos x, formato (n_max+1, len(x))"""
    n_max = _validar_grau(n_max)
    pontos, _ = _como_array(x)
    tabela = np.empty((n_max + 1, pontos.size))
    for k, mantissa, log_escala in _recorrencia_normalizada(n_max, pontos, com_peso):
        tabela[k] = _reconstruir(mantissa, log_escala)
    return tabela


def iter_hermite_normalized(n_max: int, x):
    """Gera (k, ψ̃_k(x)) para k = 0..n_max sem guardar a tabela inteira"""
    n_max = _validar_grau(n_max)
    pontos, _ = _como_array(x)
    for k, mantissa, log_escala in _recorrencia_normalizada(n_max, pontos):
        yield k, _reconstruir(mantissa, log_escala)

# ==================== QUADRATURAS ====================

def _verificar_monomios(nos: np.ndarray, pesos: np.ndarray, m: int):
    """Confere a exatidão da regra de Gauss–Hermite em monômios de grau baixo"""
    grau_max = min(2 * m - 1, QUAD_MONOMIAL_DEGREE)
    rtol = QUAD_MONOMIAL_RTOL if m <= 100 else QUAD_MONOMIAL_RTOL_LARGE
    for grau in range(grau_max + 1):
        soma = math.fsum(pesos * nos ** grau)
        if grau % 2:
            escala = math.fsum(pesos * np.abs(nos) ** grau)
            erro = abs(soma) / escala if escala else 0.0
        else:
            exato = math.exp(log_gamma((grau + 1) / 2.0))
            erro = abs(soma - exato) / exato
        if erro > rtol:
            raise QuadratureError(
                f"regra de Gauss–Hermite com {m} nós falhou no monômio x^{grau} (erro {erro:.2e})"
            )


@lru_cache(maxsize=32)
def gauss_hermite_rule(m: int) -> QuadratureRule:
    """Nós e pesos de Gauss–Hermite por Golub–Welsch (matriz de Jacobi e QL implícito)"""
    if int(m) != m or m < 1 or m > 10_000:
        raise DomainError(f"número de nós deve estar em 1..10000, recebido {m}")
    m = int(m)
    diagonal = np.zeros(m)
    fora = np.sqrt(np.arange(1, m) / 2.0)
    nos, primeira = tridiagonal_ql(diagonal, fora, first_row=True)
    pesos = math.sqrt(math.pi) * primeira ** 2

    # Função de Christoffel: w e^{x²} = 1 / Σ_{k<m} ψ̃_k(x)²
    acumulado = np.zeros(m)
    for _, mantissa, log_escala in _recorrencia_normalizada(m - 1, nos):
        acumulado += _reconstruir(mantissa, log_escala) ** 2
    escalados = 1.0 / acumulado

    if np.any(np.diff(nos) <= 0.0):
        raise QuadratureError(f"nós de Gauss–Hermite não estritamente crescentes (m={m})")
    if not np.all(np.isfinite(escalados)) or np.any(escalados <= 0.0):
        raise QuadratureError(f"pesos escalados não positivos (m={m})")
    if not np.all(np.isfinite(pesos)) or np.any(pesos < 0.0):
        raise QuadratureError(f"pesos de Gauss–Hermite inválidos (m={m})")
    _verificar_monomios(nos, pesos, m)

    for arr in (nos, pesos, escalados):
        arr.flags.writeable = False
    logger.debug("regra de Gauss–Hermite construída com %d nós", m)
    return QuadratureRule(
        kind="gauss_hermite",
        nodes=nos,
        weights=pesos,
        interval=(-math.inf, math.inf),
        scaled_weights=escalados,
    )


def composite_gauss_legendre_rule(breakpoints, order: int = GL_ORDER,
                                  max_panel_width: float = None) -> QuadratureRule:
    """Gauss–Legendre composta com painéis separados nos pontos de quebra"""
    quebras = np.unique(np.asarray(breakpoints, dtype=float))
    if quebras.size < 2:
        raise QuadratureError("são necessários ao menos dois pontos de quebra")
    base_nos, base_pesos = np.polynomial.legendre.leggauss(order)
    nos, pesos = [], []
    for a, b in zip(quebras[:-1], quebras[1:]):
        paineis = 1
        if max_panel_width:
            paineis = max(1, math.ceil((b - a) / max_panel_width))
        bordas = np.linspace(a, b, paineis + 1)
        for ini, fim in zip(bordas[:-1], bordas[1:]):
            meio = 0.5 * (ini + fim)
            raio = 0.5 * (fim - ini)
            nos.append(meio + raio * base_nos)
            pesos.append(raio * base_pesos)
    nos = np.concatenate(nos)
    pesos = np.concatenate(pesos)
    for arr in (nos, pesos):
        arr.flags.writeable = False
    return QuadratureRule(
        kind="composite_gauss_legendre",
        nodes=nos,
        weights=pesos,
        interval=(float(quebras[0]), float(quebras[-1])),
        scaled_weights=pesos,
    )


def adaptive_integral(funcao: Callable, breakpoints, rtol: float = ADAPTIVE_RTOL,
                      order: int = 10, max_levels: int = ADAPTIVE_MAX_LEVELS) -> float:
    """∫ f dx por Gauss–Legendre composta, dobrando os painéis até estabilizar"""
    quebras = np.unique(np.asarray(breakpoints, dtype=float))
    largura = float(quebras[-1] - quebras[0])
    anterior = None
    for nivel in range(max_levels):
        regra = composite_gauss_legendre_rule(
            quebras, order=order, max_panel_width=largura / 2 ** nivel
        )
        termos = regra.weights * funcao(regra.nodes)
        valor = math.fsum(termos)
        # integrais que se cancelam comparam com a escala de ∫|f|
        escala = max(abs(valor), 1e-3 * math.fsum(np.abs(termos)), 1e-300)
        if anterior is not None and abs(valor - anterior) <= rtol * escala:
            return valor
        anterior = valor
    raise ConvergenceError(f"integração adaptativa não atingiu rtol={rtol} em {max_levels} níveis")

# ==================== SOMA DE TURÁN E h_n ====================

def turan_sum(n: int, x):
    """Σ_{k=0}^n H_k(x)² / (2^k k!)"""
    n = _validar_grau(n)
    pontos, escalar = _como_array(x)
    total = np.zeros_like(pontos)
    for _, mantissa, log_escala in _recorrencia_normalizada(n, pontos, com_peso=False):
        total += _reconstruir(mantissa, log_escala) ** 2
    return _saida(math.sqrt(math.pi) * total, escalar)


def _log_soma_quadrados(n: int, pontos: np.ndarray) -> np.ndarray:
    """ln Σ_{k<=n} ψ̃_k(x)²"""
    acumulado = np.full_like(pontos, -np.inf)
    for _, mantissa, log_escala in _recorrencia_normalizada(n, pontos):
        acumulado = np.logaddexp(acumulado, 2.0 * _log_abs(mantissa, log_escala))
    return acumulado


def h_n(n: int, x, log_scale: bool = False):
    """h_n(x) = e^{-x²}[H_{n+1}² - H_n H_{n+2}] = √π 2^{n+1} n! Σ_{k<=n} ψ̃_k(x)²"""
    n = _validar_grau(n)
    pontos, escalar = _como_array(x)
    log_valor = (
        _LOG_SQRT_PI + (n + 1) * math.log(2.0) + _log_fatorial(n)
        + _log_soma_quadrados(n, pontos)
    )
    if log_scale:
        return _saida(log_valor, escalar)
    if np.any(log_valor > _LOG_MAX):
        raise RangeOverflowError(f"h_{n} não é representável; use log_scale=True")
    return _saida(np.exp(log_valor), escalar)


def h_n_bound(n: int, log_scale: bool = False) -> float:
    """Cota superior de h_n sobre ℝ (atingida em x = 0 para n par)"""
    n = _validar_grau(n)
    base = (n + 1) * math.log(4.0) - math.log(2.0 * math.pi)
    if n % 2:
        log_cota = base + math.log((2 * n + 3) / (n + 1.0)) + 2.0 * log_gamma(n / 2.0 + 1.0)
    else:
        log_cota = base + math.log(n + 1.0) + 2.0 * log_gamma((n + 1) / 2.0)
    if log_scale:
        return log_cota
    if log_cota > _LOG_MAX:
        raise RangeOverflowError(f"cota de h_{n} não é representável; use log_scale=True")
    return math.exp(log_cota)


def h_n_derivative(n: int, x):
    """h_n'(x) = -2 e^{-x²} H_n(x) H_{n+1}(x)"""
    n = _validar_grau(n)
    pontos, escalar = _como_array(x)
    linhas = list(_recorrencia_normalizada(n + 1, pontos))
    _, mant_n, esc_n = linhas[n]
    _, mant_n1, esc_n1 = linhas[n + 1]
    log_mod = (
        log_hermite_norm(n) + log_hermite_norm(n + 1)
        + _log_abs(mant_n, esc_n) + _log_abs(mant_n1, esc_n1)
    )
    sinal = np.sign(mant_n) * np.sign(mant_n1)
    with np.errstate(over="ignore"):
        valor = -2.0 * sinal * np.exp(log_mod)
    return _saida(np.where(sinal == 0.0, 0.0, valor), escalar)

# ==================== MOMENTOS ====================

def _exp_representavel(log_valor: float, descricao: str) -> float:
    if log_valor > _LOG_MAX:
        raise RangeOverflowError(f"{descricao} excede o maior float representável")
    return math.exp(log_valor)


def hermite_moment_double(n: int, m: int) -> float:
    """∫ e^{-x²} H_n H_m dx = δ_nm √π 2^n n!"""
    n, m = _validar_grau(n), _validar_grau(m)
    if n != m:
        return 0.0
    return _exp_representavel(2.0 * log_hermite_norm(n), f"‖H_{n}‖²")


def hermite_moment_triple(alpha: int, beta: int, gamma: int) -> float:
    """∫ e^{-x²} H_α H_β H_γ dx"""
    graus = [_validar_grau(g) for g in (alpha, beta, gamma)]
    soma = sum(graus)
    if soma % 2:
        return 0.0
    s = soma // 2
    if s < max(graus):
        return 0.0
    log_valor = _LOG_SQRT_PI + s * math.log(2.0)
    for g in graus:
        log_valor += _log_fatorial(g) - _log_fatorial(s - g)
    return _exp_representavel(log_valor, "momento triplo")


def gaussian_squared_moment(k: int) -> float:
    """∫ e^{-2x²} H_k² dx = 2^{k-1/2} Γ(k+1/2)"""
    k = _validar_grau(k)
    return _exp_representavel((k - 0.5) * math.log(2.0) + log_gamma(k + 0.5), "momento gaussiano")


def hermite_moment_quadratic(k: int) -> float:
    """∫ e^{-x²} x² H_k² dx = √π 2^{k-1} k! (2k + 1)"""
    k = _validar_grau(k)
    log_valor = _LOG_SQRT_PI + (k - 1) * math.log(2.0) + _log_fatorial(k) + math.log(2 * k + 1)
    return _exp_representavel(log_valor, "momento quadrático")

# ==================== BATERIA DE IDENTIDADES ====================

def _derivada_richardson(funcao: Callable, x: np.ndarray, passo: float) -> np.ndarray:
    grossa = (funcao(x + passo) - funcao(x - passo)) / (2.0 * passo)
    fina = (funcao(x + passo / 2) - funcao(x - passo / 2)) / passo
    return (4.0 * fina - grossa) / 3.0


def _check_recorrencia() -> IdentityCheck:
    x = np.linspace(-8.0, 8.0, 161)
    tabela = hermite_physicists_table(100, x)
    pior = 0.0
    for n in range(1, 100):
        termos = np.abs(np.vstack([tabela[n + 1], 2 * x * tabela[n], 2 * n * tabela[n - 1]]))
        residuo = tabela[n + 1] - 2 * x * tabela[n] + 2 * n * tabela[n - 1]
        pior = max(pior, float(np.max(np.abs(residuo) / np.maximum(termos.max(axis=0), 1e-300))))
    return IdentityCheck("recurrence", pior, 1e-12)


def _check_derivada_hermite() -> IdentityCheck:
    x = np.linspace(-4.0, 4.0, 81)
    pior = 0.0
    for n in range(1, 31):
        aproximada = _derivada_richardson(lambda t: hermite_physicists(n, t), x, 1e-3)
        exata = 2.0 * n * hermite_physicists(n - 1, x)
        pior = max(pior, float(np.max(np.abs(aproximada - exata)) / np.max(np.abs(exata))))
    return IdentityCheck("derivative", pior, 1e-8)


def _check_soma_turan() -> IdentityCheck:
    x = np.linspace(-6.0, 6.0, 121)
    tabela = hermite_physicists_table(32, x)
    pior = 0.0
    for n in range(31):
        direta = np.zeros_like(x)
        for k in range(n + 1):
            direta += tabela[k] ** 2 / math.exp(k * math.log(2.0) + _log_fatorial(k))
        fechada = (tabela[n + 1] ** 2 - tabela[n] * tabela[n + 2]) / math.exp(
            (n + 1) * math.log(2.0) + _log_fatorial(n)
        )
        normalizada = turan_sum(n, x)
        pior = max(
            pior,
            float(np.max(np.abs(direta - fechada) / direta)),
            float(np.max(np.abs(direta - normalizada) / direta)),
        )
    return IdentityCheck("turan_sum", pior, 1e-8)


def _check_cota_h_n() -> IdentityCheck:
    x = np.linspace(-10.0, 10.0, 2001)
    pior = 0.0
    for n in range(21):
        log_h = h_n(n, x, log_scale=True)
        if not np.all(np.isfinite(log_h)):
            return IdentityCheck("h_n_bound", math.inf, 1e-12)
        pior = max(pior, float(np.max(log_h)) - h_n_bound(n, log_scale=True))
    return IdentityCheck("h_n_bound", max(pior, 0.0), 1e-12)


def _check_h_n_zero_par() -> IdentityCheck:
    pior = 0.0
    for n in range(0, 21, 2):
        pior = max(pior, abs(math.expm1(h_n(n, 0.0, log_scale=True) - h_n_bound(n, log_scale=True))))
    return IdentityCheck("h_n_even_zero", pior, 1e-10)


def _check_incremento_zero() -> IdentityCheck:
    x = np.linspace(-6.0, 6.0, 601)
    pior = 0.0
    for n in range(21):
        limite = hermite_physicists(n + 1, 0.0) ** 2 / (2.0 * (n + 1))
        excesso = h_n(n, x) - h_n(n, 0.0) - limite
        escala = h_n(n, 0.0)
        pior = max(pior, float(np.max(excesso)) / escala)
    return IdentityCheck("h_n_zero_increment", max(pior, 0.0), 1e-12)


def _check_derivada_h_n() -> IdentityCheck:
    x = np.linspace(-4.0, 4.0, 81)
    pior = 0.0
    for n in range(16):
        aproximada = _derivada_richardson(lambda t: h_n(n, t), x, 1e-3)
        exata = h_n_derivative(n, x)
        pior = max(pior, float(np.max(np.abs(aproximada - exata)) / np.max(np.abs(exata))))
    return IdentityCheck("h_n_derivative", pior, 1e-8)


def _check_ortonormalidade() -> IdentityCheck:
    tamanho = 60
    regra = gauss_hermite_rule(tamanho + 8)
    tabela = hermite_normalized_table(tamanho - 1, regra.nodes)
    gram = (tabela * regra.dx_weights) @ tabela.T
    return IdentityCheck("orthonormality", float(np.max(np.abs(gram - np.eye(tamanho)))), 1e-10)


def _check_momentos() -> list:
    regra = gauss_hermite_rule(40)
    tabela = hermite_physicists_table(30, regra.nodes)

    pior_duplo = 0.0
    for n in range(21):
        for m in range(21):
            termos = regra.weights * tabela[n] * tabela[m]
            exato = hermite_moment_double(n, m)
            escala = max(abs(exato), math.fsum(np.abs(termos)))
            pior_duplo = max(pior_duplo, abs(math.fsum(termos) - exato) / escala)

    pior_triplo = 0.0
    for a in range(11):
        for b in range(11):
            for c in range(11):
                termos = regra.weights * tabela[a] * tabela[b] * tabela[c]
                exato = hermite_moment_triple(a, b, c)
                escala = max(abs(exato), math.fsum(np.abs(termos)))
                pior_triplo = max(pior_triplo, abs(math.fsum(termos) - exato) / escala)

    # ∫ e^{-2x²} H_k(x)² dx = 2^{-1/2} ∫ e^{-y²} H_k(y/√2)² dy
    escalada = hermite_physicists_table(30, regra.nodes / math.sqrt(2.0))
    pior_gauss = 0.0
    pior_quad = 0.0
    for k in range(31):
        quad = math.fsum(regra.weights * escalada[k] ** 2) / math.sqrt(2.0)
        exato = gaussian_squared_moment(k)
        pior_gauss = max(pior_gauss, abs(quad - exato) / exato)
        quad = math.fsum(regra.weights * regra.nodes ** 2 * tabela[k] ** 2)
        exato = hermite_moment_quadratic(k)
        pior_quad = max(pior_quad, abs(quad - exato) / exato)

    return [
        IdentityCheck("moment_double", pior_duplo, 1e-10),
        IdentityCheck("moment_triple", pior_triplo, 1e-10),
        IdentityCheck("moment_gaussian_squared", pior_gauss, 1e-10),
        IdentityCheck("moment_quadratic", pior_quad, 1e-10),
    ]


def run_identity_suite() -> list:
    """Executa todas as identidades de Hermite e devolve a lista de verificações"""
    verificacoes = [
        _check_recorrencia(),
        _check_derivada_hermite(),
        _check_soma_turan(),
        _check_cota_h_n(),
        _check_h_n_zero_par(),
        _check_incremento_zero(),
        _check_derivada_h_n(),
        _check_ortonormalidade(),
    ]
    verificacoes.extend(_check_momentos())
    for item in verificacoes:
        if not item.passed:
            logger.warning("identidade %s falhou: resíduo %.3g", item.name, item.max_residual)
    return verificacoes

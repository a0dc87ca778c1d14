"""
Módulo de Comandos
Orquestração dos comandos sequences, verify, trace, counterexample e hermite-check
"""
import logging
import math
from dataclasses import asdict, dataclass

import numpy as np
import pandas as pd
import scipy

from config.settings import (
    BASIS_TOL,
    COMANDOS,
    COUNTEREXAMPLE_BASIS,
    FORMATOS,
    GENPOT_N_MAX,
    N_MAX_PADRAO,
    S_PADRAO,
    TEOREMAS,
    VERSION,
)
from modules.bounds import (
    BoundReport,
    check_cor53,
    check_power1,
    check_power1a,
    check_powerzeromean,
    check_thm31,
    check_thm41,
    check_thm51,
    counterexample,
    regularized_sum,
)
from modules.errors import DomainError, HypothesisError, NumericalError, UnboundedError
from modules.hermite import run_identity_suite
from modules.potentials import integral, is_nonnegative, parse_potential, zero_potential
from modules.sequences import chi, sequence_table
from modules.solver import solve_spectrum
from modules.special import z0
from reports.writer import gravar_relatorio

logger = logging.getLogger(__name__)

COLUNAS_SEQUENCIAS = ["n", "omega", "chi", "epsilon", "tau", "chi_residual"]
COLUNAS_VERIFICACAO = ["theorem", "n", "s", "lhs", "rhs", "slack", "tolerance", "verdict",
                       "note", "digest"]
COLUNAS_TRACO = ["n", "regularized_sum", "rhs_chi", "trace_target", "gap_to_target"]
COLUNAS_CONTRAEXEMPLO = ["theorem", "n", "N", "K", "K_min", "delta", "regularized_sum",
                         "bound", "odd_test_bound", "verdict", "digest"]
COLUNAS_HERMITE = ["check", "max_residual", "threshold", "verdict"]

_TEOREMAS_POTENCIA = ("power1", "power1a", "powerzeromean")


@dataclass(frozen=True)
class RunConfig:
    """Configuração de uma execução da linha de comando"""
    command: str
    potential: str = None
    n_max: int = N_MAX_PADRAO
    s_values: tuple = S_PADRAO
    basis_size: int = None
    quad_nodes: int = None
    tol: float = BASIS_TOL
    format: str = "csv"
    out: str = None
    n: int = None
    N: float = None

    def __post_init__(self):
        if self.command not in COMANDOS:
            raise DomainError(f"comando desconhecido: {self.command}")
        if self.format not in FORMATOS:
            raise DomainError(f"formato deve ser um de {FORMATOS}, recebido {self.format}")
        if int(self.n_max) != self.n_max or self.n_max < 0:
            raise DomainError(f"--n-max deve ser inteiro >= 0, recebido {self.n_max}")
        if not self.tol > 0.0:
            raise DomainError(f"--tol deve ser positivo, recebido {self.tol}")
        if any(not s > 0.0 for s in self.s_values):
            raise DomainError(f"--s deve conter apenas valores positivos: {self.s_values}")
        for nome in ("basis_size", "quad_nodes"):
            valor = getattr(self, nome)
            if valor is not None and valor < 1:
                raise DomainError(f"--{nome.replace('_', '-')} deve ser >= 1, recebido {valor}")
        object.__setattr__(self, "s_values", tuple(sorted(float(s) for s in self.s_values)))

    def meta(self) -> dict:
        """Eco da configuração e versões (sem carimbo de tempo)"""
        eco = asdict(self)
        eco["s_values"] = list(self.s_values)
        eco.update({
            "version": VERSION,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "pandas": pd.__version__,
        })
        return eco

# ==================== FUNÇÕES AUXILIARES ====================

def _potencial(config: RunConfig):
    if config.potential is None:
        return zero_potential()
    return parse_potential(config.potential)


def _gravar(config: RunConfig, linhas: list, colunas: list, rodape: dict = None):
    gravar_relatorio(linhas, colunas, config.format, config.meta(), config.out, rodape)


def _linha_pulada(teorema: str, n: int, s: float, motivo) -> dict:
    logger.info("%s n=%d pulado: %s", teorema, n, motivo)
    return BoundReport.skipped(teorema, f"skipped: hypothesis ({motivo})", n=n, s=s).as_row()


def _linha_erro(teorema: str, n: int, s: float, erro: Exception) -> dict:
    logger.error("%s n=%d falhou: %s", teorema, n, erro)
    return {
        "theorem": teorema,
        "n": n,
        "s": s,
        "verdict": "error",
        "note": f"{type(erro).__name__}: {erro}",
    }


def _executar(teorema: str, n: int, s: float, verificacao) -> dict:
    try:
        relatorio = verificacao()
    except (HypothesisError, UnboundedError) as e:
        return _linha_pulada(teorema, n, s, e)
    except NumericalError as e:
        return _linha_erro(teorema, n, s, e)
    if not relatorio.passed:
        logger.warning("%s n=%d s=%s violada: folga %.3g", teorema, n, s, relatorio.slack)
    return relatorio.as_row()


def _codigo_saida(linhas: list) -> int:
    return 0 if all(linha["verdict"] in ("pass", "skipped") for linha in linhas) else 1

# ==================== COMANDOS ====================

def cmd_sequences(config: RunConfig) -> int:
    """Tabela de ω, χ, ε, τ com o rodapé -Z₀(1/2)"""
    tabela = sequence_table(config.n_max)
    limite = -z0(0.5)
    rodape = {"n": "-Z0(1/2)", "omega": limite}
    _gravar(config, tabela.rows(), COLUNAS_SEQUENCIAS, rodape)
    return 0


def cmd_verify(config: RunConfig) -> int:
    """Uma linha por (teorema, n, s); saída 0 somente se nenhuma verificação falha"""
    q = _potencial(config)
    opcoes = {"basis_size": config.basis_size, "quad_nodes": config.quad_nodes}
    espectro = solve_spectrum(q, config.n_max + 1, tol=config.tol, **opcoes)
    logger.info("espectro de %s: base %d, estimativa máxima %.3g", q, espectro.basis_size,
                float(np.max(espectro.convergence_estimate)))

    simples = {
        "thm31": check_thm31,
        "thm41": check_thm41,
        "thm51": check_thm51,
        "cor53": check_cor53,
    }
    potencias = {
        "power1": check_power1,
        "power1a": check_power1a,
        "powerzeromean": check_powerzeromean,
    }

    linhas = []
    for teorema in TEOREMAS:
        if teorema in simples:
            n_final = config.n_max
            if teorema in ("thm51", "cor53"):
                n_final = min(config.n_max, GENPOT_N_MAX)
            for n in range(n_final + 1):
                linhas.append(_executar(
                    teorema, n, None,
                    lambda f=simples[teorema], n=n: f(q, n, spectrum=espectro, **opcoes),
                ))
            if n_final < config.n_max:
                linhas.append(BoundReport.skipped(
                    teorema, f"skipped: n > {GENPOT_N_MAX} fora do alcance", n=n_final + 1
                ).as_row())
        elif teorema in potencias:
            for n in range(config.n_max + 1):
                for s in config.s_values:
                    linhas.append(_executar(
                        teorema, n, s,
                        lambda f=potencias[teorema], n=n, s=s: f(
                            q, n, s, spectrum=espectro, **opcoes
                        ),
                    ))

    _gravar(config, linhas, COLUNAS_VERIFICACAO)
    return _codigo_saida(linhas)


def cmd_trace(config: RunConfig) -> int:
    """Convergência da soma regularizada para -Z₀(1/2) ∫q / π"""
    q = _potencial(config)
    if not is_nonnegative(q):
        raise HypothesisError(f"trace exige q >= 0, recebido {q}")
    espectro = solve_spectrum(
        q, config.n_max + 1, basis_size=config.basis_size, quad_nodes=config.quad_nodes,
        tol=config.tol,
    )
    total = integral(q)
    alvo = -z0(0.5) * total / math.pi
    linhas = []
    for n in range(config.n_max + 1):
        soma = regularized_sum(espectro.eigenvalues, total, n)
        linhas.append({
            "n": n,
            "regularized_sum": soma,
            "rhs_chi": chi(n) * total / math.pi,
            "trace_target": alvo,
            "gap_to_target": soma - alvo,
        })
    _gravar(config, linhas, COLUNAS_TRACO)
    return 0


def cmd_counterexample(config: RunConfig) -> int:
    """Potencial box(K, δ) com soma regularizada <= -N"""
    n = 0 if config.n is None else config.n
    N = 1.0 if config.N is None else config.N
    q, relatorio = counterexample(n, N, basis_size=config.basis_size or COUNTEREXAMPLE_BASIS)
    logger.info("contraexemplo: %s", q)
    linha = {
        "theorem": relatorio.theorem_id,
        "n": relatorio.n,
        "N": relatorio.extras["N"],
        "K": relatorio.extras["K"],
        "K_min": relatorio.extras["K_min"],
        "delta": relatorio.extras["delta"],
        "regularized_sum": relatorio.lhs,
        "bound": relatorio.rhs,
        "odd_test_bound": relatorio.extras["odd_test_bound"],
        "verdict": relatorio.verdict,
        "digest": relatorio.inputs_digest["sha256"],
    }
    _gravar(config, [linha], COLUNAS_CONTRAEXEMPLO)
    return 0 if relatorio.passed else 1


def cmd_hermite_check(config: RunConfig) -> int:
    """Suíte de identidades de Hermite com o maior resíduo de cada uma"""
    linhas = []
    for verificacao in run_identity_suite():
        if not verificacao.passed:
            logger.error("identidade %s com resíduo %.3g", verificacao.name,
                         verificacao.max_residual)
        linhas.append({
            "check": verificacao.name,
            "max_residual": verificacao.max_residual,
            "threshold": verificacao.threshold,
            "verdict": "pass" if verificacao.passed else "fail",
        })
    _gravar(config, linhas, COLUNAS_HERMITE)
    return _codigo_saida(linhas)


DESPACHO = {
    "sequences": cmd_sequences,
    "verify": cmd_verify,
    "trace": cmd_trace,
    "counterexample": cmd_counterexample,
    "hermite-check": cmd_hermite_check,
}


def run(config: RunConfig) -> int:
    """Executa o comando configurado e devolve o código de saída"""
    logger.debug("executando %s", config.command)
    return DESPACHO[config.command](config)

"""
Espectro Hermite - Autovalores do oscilador harmônico perturbado
Ponto de entrada da linha de comando
"""
import argparse
import logging
import sys
from pathlib import Path

# Adicionar o diretório raiz ao path
sys.path.insert(0, str(Path(__file__).parent))

from config.settings import (
    BASIS_TOL,
    COMANDOS,
    FORMATOS,
    LOG_FORMAT,
    LOG_LEVEL,
    N_MAX_PADRAO,
    S_PADRAO,
)
from modules.cli import RunConfig, run
from modules.errors import CounterexampleError, DomainError, NumericalError, PotentialSpecError

logger = logging.getLogger("espectro")

AJUDA_COMANDOS = {
    "sequences": "tabela de ω, χ, ε, τ e o limite -Z₀(1/2)",
    "verify": "verifica as desigualdades para um potencial",
    "trace": "convergência da soma regularizada para a fórmula do traço",
    "counterexample": "constrói q >= 0 com soma regularizada <= -N",
    "hermite-check": "suíte de identidades dos polinômios de Hermite",
}


def _lista_s(texto: str) -> tuple:
    """Converte '0.5,1,2' em tupla de floats positivos"""
    try:
        valores = tuple(float(parte) for parte in texto.split(",") if parte.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"lista de s inválida: {texto!r}")
    if not valores or any(not s > 0.0 for s in valores):
        raise argparse.ArgumentTypeError(f"s deve ser uma lista de valores positivos: {texto!r}")
    return valores


def criar_parser() -> argparse.ArgumentParser:
    """Parser com um subcomando por operação e as opções compartilhadas"""
    comum = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    comum.add_argument("--potential", default=None,
                       help='potencial q, ex.: "gauss(a=1,s=0.5)" (padrão: q ≡ 0)')
    comum.add_argument("--n-max", dest="n_max", type=int, default=N_MAX_PADRAO,
                       help="maior índice n (padrão: %(default)s)")
    comum.add_argument("--s", dest="s_values", type=_lista_s, default=S_PADRAO,
                       help="expoentes s separados por vírgula (padrão: 0.5,1,2)")
    comum.add_argument("--basis-size", dest="basis_size", type=int, default=None,
                       help="tamanho fixo da base de Hermite")
    comum.add_argument("--quad-nodes", dest="quad_nodes", type=int, default=None,
                       help="nós de Gauss-Hermite")
    comum.add_argument("--tol", type=float, default=BASIS_TOL,
                       help="tolerância de convergência da base (padrão: %(default)s)")
    comum.add_argument("--format", choices=FORMATOS, default="csv", help="formato do relatório")
    comum.add_argument("--out", default=None, help="arquivo de saída (padrão: stdout)")
    comum.add_argument("--n", dest="n", type=int, default=None, help="índice n do contraexemplo")
    comum.add_argument("--N", dest="N", type=float, default=None, help="alvo N do contraexemplo")

    parser = argparse.ArgumentParser(
        prog="espectro",
        description="Autovalores de -u'' + (x² + q) u e verificação das cotas para suas somas",
        allow_abbrev=False,
    )
    subparsers = parser.add_subparsers(dest="command", metavar="comando")
    subparsers.required = True
    for comando in COMANDOS:
        subparsers.add_parser(comando, parents=[comum], help=AJUDA_COMANDOS[comando],
                              allow_abbrev=False)
    return parser


def configurar_logging():
    logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT, stream=sys.stderr)


def main(argv=None) -> int:
    """Executa a linha de comando e devolve o código de saída"""
    args = criar_parser().parse_args(argv)
    configurar_logging()

    try:
        config = RunConfig(**vars(args))
        return run(config)
    except (PotentialSpecError, DomainError) as e:
        print(f"erro: {e}", file=sys.stderr)
        return 2
    except CounterexampleError as e:
        print(f"erro: {e}", file=sys.stderr)
        for chave, valor in sorted(e.diagnostics.items()):
            print(f"  {chave}: {valor}", file=sys.stderr)
        return 1
    except NumericalError as e:
        logger.error("%s: %s", type(e).__name__, e)
        print(f"erro: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

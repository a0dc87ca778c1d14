"""
Configurações do Espectro Hermite
"""
import os

from dotenv import load_dotenv

load_dotenv()


def _env_float(nome: str, padrao: float) -> float:
    """Lê um float do ambiente com valor padrão"""
    valor = os.getenv(nome)
    if valor is None or valor == "":
        return padrao
    return float(valor)


def _env_int(nome: str, padrao: int) -> int:
    """Lê um inteiro do ambiente com valor padrão"""
    valor = os.getenv(nome)
    if valor is None or valor == "":
        return padrao
    return int(valor)


# Função para formatar números nos relatórios
def formatar_float(valor) -> str:
    """Formata um número com FLOAT_DIGITS algarismos significativos"""
    if valor is None:
        return ""
    if isinstance(valor, bool):
        return str(valor).lower()
    if isinstance(valor, int):
        return str(valor)
    try:
        numero = float(valor)
    except (TypeError, ValueError):
        return str(valor)
    if numero != numero:
        return "nan"
    if numero == 0.0:
        return "0"
    return f"{numero:.{FLOAT_DIGITS}g}"


def arredondar_float(valor):
    """Arredonda para FLOAT_DIGITS algarismos (usado no JSON)"""
    if isinstance(valor, float):
        return float(formatar_float(valor))
    return valor


VERSION = "1.0.0"

# Logging
LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING").upper()
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# Funções especiais
ZETA_TOL = _env_float("ZETA_TOL", 1e-9)
ZETA_MIN_INDEX = _env_int("ZETA_MIN_INDEX", 10)
HERMITE_RAW_MAX_DEGREE = 150

# Autovalores
QL_MAX_ITER = _env_int("QL_MAX_ITER", 50)
JACOBI_MAX_SWEEPS = _env_int("JACOBI_MAX_SWEEPS", 50)
JACOBI_MAX_SIZE = _env_int("JACOBI_MAX_SIZE", 200)

# Base de Galerkin
MIN_BASIS = _env_int("MIN_BASIS", 120)
MAX_BASIS = _env_int("MAX_BASIS", 512)
BASIS_TOL = _env_float("BASIS_TOL", 1e-8)
ENTRY_WARN = _env_float("ENTRY_WARN", 1e12)
TAIL_DEGREE_FACTOR = _env_int("TAIL_DEGREE_FACTOR", 16)
GH_EXTRA_NODES = 40
GL_ORDER = 20

# Quadratura
QUAD_MONOMIAL_DEGREE = 12
QUAD_MONOMIAL_RTOL = 1e-12
QUAD_MONOMIAL_RTOL_LARGE = 1e-10
ADAPTIVE_RTOL = 1e-10
ADAPTIVE_MAX_LEVELS = 16

# Coeficientes de Hermite
COEFF_MAX_DEGREE = 100
COEFF_TAIL_WARN = _env_float("COEFF_TAIL_WARN", 1e-8)

# q_m
QM_SAMPLES = 10_000
QM_XTOL = 1e-10

# Oráculo de diferenças finitas
FD_HALF_WIDTH = _env_float("FD_HALF_WIDTH", 12.0)
FD_POINTS = _env_int("FD_POINTS", 4000)

# Verificação das desigualdades
VERDICT_TOL_FLOOR = _env_float("VERDICT_TOL_FLOOR", 1e-8)
GENPOT_N_MAX = _env_int("GENPOT_N_MAX", 15)
S_PADRAO = (0.5, 1.0, 2.0)
N_MAX_PADRAO = 10

# Contraexemplo
DELTA_FLOOR_EXP = _env_int("DELTA_FLOOR_EXP", 20)
K_SAFETY = _env_float("K_SAFETY", 2.0)
COUNTEREXAMPLE_BASIS = _env_int("COUNTEREXAMPLE_BASIS", 120)

# Relatórios
FLOAT_DIGITS = _env_int("FLOAT_DIGITS", 10)
FORMATOS = ["csv", "json"]

# Famílias de potenciais (parâmetros na ordem da gramática)
FAMILIAS_POTENCIAL = {
    "gauss": ("a", "s"),
    "box": ("k", "d"),
    "sech2": ("a", "s"),
    "meanzero": ("a",),
    "custom_samples": (),
}

# Desigualdades verificadas (ordem de saída do verify)
TEOREMAS = {
    "thm31": {"nome": "Soma regularizada, q >= 0", "direcao": "<="},
    "thm41": {"nome": "Soma regularizada, q indefinido", "direcao": "<="},
    "thm51": {"nome": "Soma de autovalores via coeficientes de Hermite", "direcao": "<="},
    "cor53": {"nome": "Soma regularizada via coeficientes de Hermite", "direcao": "<="},
    "power1": {"nome": "Potências negativas das lacunas", "direcao": ">="},
    "power1a": {"nome": "Potências negativas dos autovalores", "direcao": ">="},
    "powerzeromean": {"nome": "Potências negativas, q de média zero", "direcao": ">="},
    "prop34": {"nome": "Sem cota inferior para a soma regularizada", "direcao": "<="},
}

COMANDOS = ["sequences", "verify", "trace", "counterexample", "hermite-check"]

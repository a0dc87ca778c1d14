"""
Módulo de Potenciais
Famílias de perturbações q(x), gramática de especificação, normas, q_m e coeficientes de Hermite
"""
import logging
import math
import re
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from config.settings import (
    COEFF_MAX_DEGREE,
    COEFF_TAIL_WARN,
    FAMILIAS_POTENCIAL,
    GH_EXTRA_NODES,
    GL_ORDER,
    QM_SAMPLES,
    QM_XTOL,
)
from modules.errors import (
    DomainError,
    PotentialSpecError,
    RangeOverflowError,
    UnboundedError,
)
from modules.hermite import (
    QuadratureRule,
    adaptive_integral,
    composite_gauss_legendre_rule,
    gauss_hermite_rule,
    hermite_normalized_table,
    log_hermite_norm,
)

logger = logging.getLogger(__name__)

_SQRT_PI = math.sqrt(math.pi)
_PADRAO_ESPEC = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*\((.*)\)\s*$")
_FAMILIAS_PARES = ("gauss", "box", "sech2", "meanzero")


@dataclass(frozen=True)
class PotentialSpec:
    """Perturbação q pertencente a uma família com parâmetros nomeados"""
    family: str
    params: tuple
    support_hint: tuple
    samples: tuple = ()

    def param(self, nome: str) -> float:
        for chave, valor in self.params:
            if chave == nome:
                return valor
        raise KeyError(nome)

    @property
    def parametros(self) -> dict:
        return dict(self.params)

    @property
    def is_even(self) -> bool:
        return self.family in _FAMILIAS_PARES

    @property
    def has_jumps(self) -> bool:
        return self.family == "box"

    def __str__(self) -> str:
        if self.family == "custom_samples":
            return f"custom_samples(pontos={len(self.samples)})"
        argumentos = ",".join(f"{nome}={valor!r}" for nome, valor in self.params)
        return f"{self.family}({argumentos})"


@dataclass(frozen=True, eq=False)
class HermiteCoefficients:
    """Coeficientes v_j de V = Σ v_j H_j, com a energia descartada acima de J"""
    values: np.ndarray
    degree: int
    tail_estimate: float
    energy: float

    def normalized(self) -> np.ndarray:
        """c_j = v_j ‖H_j‖ (coeficientes na base ortonormal)"""
        normas = np.exp([log_hermite_norm(j) for j in range(self.degree + 1)])
        return self.values * normas

    def reconstruct(self, x) -> np.ndarray:
        """Σ_{j<=J} v_j H_j(x), avaliado pelas funções de Hermite normalizadas"""
        pontos = np.atleast_1d(np.asarray(x, dtype=float))
        tabela = hermite_normalized_table(self.degree, pontos, com_peso=False)
        return self.normalized() @ tabela

# ==================== CONSTRUÇÃO E GRAMÁTICA ====================

def _suporte(familia: str, valores: dict) -> tuple:
    """Intervalo fora do qual |q| < 1e-16"""
    if familia == "gauss":
        meia = valores["s"] * math.sqrt(37.0 + math.log1p(abs(valores["a"])))
    elif familia == "box":
        meia = valores["d"] / 2.0
    elif familia == "sech2":
        meia = 40.0 * valores["s"]
    else:
        meia = math.sqrt(44.0 + math.log1p(abs(valores["a"])))
    return (-meia, meia)


def _validar_parametros(familia: str, valores: dict):
    for nome, valor in valores.items():
        if not math.isfinite(valor):
            raise PotentialSpecError(f"parâmetro {nome} deve ser finito", token=nome)
    if familia in ("gauss", "sech2") and valores["s"] <= 0.0:
        raise PotentialSpecError(f"{familia}: s deve ser positivo", token="s")
    if familia == "box":
        if valores["k"] <= 0.0:
            raise PotentialSpecError("box: k deve ser positivo", token="k")
        if valores["d"] <= 0.0:
            raise PotentialSpecError("box: d deve ser positivo", token="d")


def make_potential(family: str, **params) -> PotentialSpec:
    """Cria uma perturbação validada a partir da família e dos parâmetros"""
    if family not in FAMILIAS_POTENCIAL or family == "custom_samples":
        raise PotentialSpecError(f"família desconhecida: {family}", token=family)
    nomes = FAMILIAS_POTENCIAL[family]
    for nome in params:
        if nome not in nomes:
            raise PotentialSpecError(f"{family}: parâmetro desconhecido {nome}", token=nome)
    for nome in nomes:
        if nome not in params:
            raise PotentialSpecError(f"{family}: parâmetro {nome} ausente", token=nome)
    valores = {nome: float(params[nome]) for nome in nomes}
    _validar_parametros(family, valores)
    return PotentialSpec(
        family=family,
        params=tuple((nome, valores[nome]) for nome in nomes),
        support_hint=_suporte(family, valores),
    )


def custom_samples(xs, qs) -> PotentialSpec:
    """Perturbação linear por partes de suporte compacto a partir de amostras"""
    xs = [float(v) for v in xs]
    qs = [float(v) for v in qs]
    if len(xs) != len(qs) or len(xs) < 2:
        raise PotentialSpecError("custom_samples exige ao menos duas amostras pareadas")
    if not all(math.isfinite(v) for v in xs + qs):
        raise PotentialSpecError("custom_samples exige valores finitos")
    if any(b <= a for a, b in zip(xs[:-1], xs[1:])):
        raise PotentialSpecError("custom_samples exige abscissas estritamente crescentes")
    return PotentialSpec(
        family="custom_samples",
        params=(),
        support_hint=(xs[0], xs[-1]),
        samples=tuple(zip(xs, qs)),
    )


def parse_potential(texto: str) -> PotentialSpec:
    """Interpreta a gramática `familia(nome=valor,...)`"""
    if not isinstance(texto, str):
        raise PotentialSpecError("especificação de potencial deve ser texto")
    encontrado = _PADRAO_ESPEC.match(texto)
    if not encontrado:
        raise PotentialSpecError(f"especificação malformada: {texto!r}", token=texto.strip())
    familia, corpo = encontrado.group(1), encontrado.group(2)
    if familia not in FAMILIAS_POTENCIAL or familia == "custom_samples":
        raise PotentialSpecError(f"família desconhecida: {familia}", token=familia)

    params = {}
    for item in filter(None, (parte.strip() for parte in corpo.split(","))):
        if "=" not in item:
            raise PotentialSpecError(f"argumento sem '=': {item!r}", token=item)
        nome, valor = (lado.strip() for lado in item.split("=", 1))
        if nome in params:
            raise PotentialSpecError(f"parâmetro repetido: {nome}", token=nome)
        try:
            params[nome] = float(valor)
        except ValueError:
            raise PotentialSpecError(f"valor inválido para {nome}: {valor!r}", token=valor)
    return make_potential(familia, **params)


def zero_potential() -> PotentialSpec:
    """q ≡ 0"""
    return make_potential("gauss", a=0.0, s=1.0)


def scaled(spec: PotentialSpec, fator: float) -> PotentialSpec:
    """Multiplica a amplitude de q por um fator"""
    fator = float(fator)
    if spec.family == "custom_samples":
        xs, qs = zip(*spec.samples)
        return custom_samples(xs, [fator * q for q in qs])
    valores = spec.parametros
    chave = "k" if spec.family == "box" else "a"
    valores[chave] *= fator
    return make_potential(spec.family, **valores)

# ==================== AVALIAÇÃO E NORMAS ====================

def evaluate(spec: PotentialSpec, x):
    """q(x), vetorizado"""
    arr = np.asarray(x, dtype=float)
    familia = spec.family
    if familia == "gauss":
        a, s = spec.param("a"), spec.param("s")
        valor = a * np.exp(-(arr / s) ** 2)
    elif familia == "box":
        k, d = spec.param("k"), spec.param("d")
        valor = np.where(np.abs(arr) <= d / 2.0, k / d, 0.0)
    elif familia == "sech2":
        a, s = spec.param("a"), spec.param("s")
        valor = a / np.cosh(np.minimum(np.abs(arr) / s, 350.0)) ** 2
    elif familia == "meanzero":
        a = spec.param("a")
        valor = a * (2.0 * arr ** 2 - 1.0) * np.exp(-arr ** 2)
    else:
        xs, qs = zip(*spec.samples)
        valor = np.interp(arr, xs, qs, left=0.0, right=0.0)
    return float(valor) if arr.ndim == 0 else valor


def _quebras(spec: PotentialSpec, absoluto: bool = False) -> list:
    """Pontos de quebra para integração (nós das amostras e trocas de sinal)"""
    if spec.family != "custom_samples":
        return list(spec.support_hint)
    pontos = [x for x, _ in spec.samples]
    if absoluto:
        for (x0, q0), (x1, q1) in zip(spec.samples[:-1], spec.samples[1:]):
            if q0 * q1 < 0.0:
                pontos.append(x0 - q0 * (x1 - x0) / (q1 - q0))
    return sorted(pontos)


def integral(spec: PotentialSpec) -> float:
    """∫ q dx"""
    familia = spec.family
    if familia == "gauss":
        return spec.param("a") * spec.param("s") * _SQRT_PI
    if familia == "box":
        return spec.param("k")
    if familia == "sech2":
        return 2.0 * spec.param("a") * spec.param("s")
    if familia == "meanzero":
        return 0.0
    return adaptive_integral(lambda t: evaluate(spec, t), _quebras(spec))


def l1_norm(spec: PotentialSpec) -> float:
    """∫ |q| dx"""
    familia = spec.family
    if familia == "gauss":
        return abs(spec.param("a")) * spec.param("s") * _SQRT_PI
    if familia == "box":
        return spec.param("k")
    if familia == "sech2":
        return 2.0 * abs(spec.param("a")) * spec.param("s")
    if familia == "meanzero":
        return abs(spec.param("a")) * 2.0 * math.sqrt(2.0) * math.exp(-0.5)
    return adaptive_integral(lambda t: np.abs(evaluate(spec, t)), _quebras(spec, absoluto=True))


def is_nonnegative(spec: PotentialSpec) -> bool:
    """Certifica q >= 0 pela família e parâmetros"""
    familia = spec.family
    if familia in ("gauss", "sech2"):
        return spec.param("a") >= 0.0
    if familia == "box":
        return True
    if familia == "meanzero":
        return spec.param("a") == 0.0
    return all(q >= 0.0 for _, q in spec.samples)


def _certificar_limitado(spec: PotentialSpec):
    familia = spec.family
    if familia == "gauss" and spec.param("a") < 0.0 and spec.param("s") > 1.0:
        raise UnboundedError(f"{spec}: -q e^(x²) cresce sem limite para s > 1")
    if familia == "sech2" and spec.param("a") < 0.0:
        raise UnboundedError(f"{spec}: -q e^(x²) cresce sem limite (decaimento exponencial)")
    if familia == "meanzero" and spec.param("a") < 0.0:
        raise UnboundedError(f"{spec}: -q e^(x²) cresce como |a|(2x²-1)")


def q_m(spec: PotentialSpec) -> float:
    """max(0, sup_x(-q(x) e^{x²}))"""
    _certificar_limitado(spec)
    if is_nonnegative(spec):
        return 0.0

    def alvo(t):
        with np.errstate(over="ignore"):
            return -evaluate(spec, t) * np.exp(np.square(t))

    inicio, fim = spec.support_hint
    malha = np.linspace(inicio, fim, QM_SAMPLES)
    valores = alvo(malha)
    if not np.all(np.isfinite(valores)):
        raise RangeOverflowError(f"{spec}: -q e^(x²) não representável no suporte")
    posicao = int(np.argmax(valores))
    esquerda = malha[max(posicao - 1, 0)]
    direita = malha[min(posicao + 1, malha.size - 1)]
    refinado = minimize_scalar(
        lambda t: -float(alvo(t)),
        bounds=(esquerda, direita),
        method="bounded",
        options={"xatol": QM_XTOL},
    )
    return max(0.0, float(valores[posicao]), -float(refinado.fun))


def cell_average(spec: PotentialSpec, centros, passo: float) -> np.ndarray:
    """Média de q em células [c - h/2, c + h/2] (exata para box)"""
    centros = np.asarray(centros, dtype=float)
    if spec.family == "box":
        k, d = spec.param("k"), spec.param("d")
        sobreposicao = np.clip(
            np.minimum(centros + passo / 2, d / 2) - np.maximum(centros - passo / 2, -d / 2),
            0.0,
            None,
        )
        return (k / d) * sobreposicao / passo
    if spec.family == "custom_samples":
        nos, pesos = np.polynomial.legendre.leggauss(5)
        amostras = centros[:, None] + 0.5 * passo * nos[None, :]
        return evaluate(spec, amostras) @ (0.5 * pesos)
    return evaluate(spec, centros)

# ==================== QUADRATURA E COEFICIENTES ====================

def perturbation_rule(spec: PotentialSpec, degree: int, nodes: int = None) -> QuadratureRule:
    """Regra para integrar q contra produtos de funções de Hermite até o grau dado.

    Gauss–Hermite para famílias suaves; Gauss–Legendre composta, quebrada nos
    saltos ou nós, para box e custom_samples.
    """
    if spec.family in ("box", "custom_samples"):
        largura = 2.0 / math.sqrt(2.0 * degree + 2.0)
        return composite_gauss_legendre_rule(
            _quebras(spec), order=GL_ORDER, max_panel_width=largura
        )
    m = nodes if nodes is not None else 2 * degree + GH_EXTRA_NODES
    return gauss_hermite_rule(min(int(m), 10_000))


def _coeficientes_perturbacao(spec: PotentialSpec, grau: int, nodes: int = None) -> tuple:
    """Coeficientes ortonormais c_j = ∫ e^{-x²} q p_j e a energia ∫ e^{-x²} q²"""
    regra = perturbation_rule(spec, grau, nodes)
    x = regra.nodes
    valores = evaluate(spec, x)
    fator = regra.dx_weights * np.exp(-0.5 * x * x) * valores
    tabela = hermite_normalized_table(grau, x)
    coeficientes = tabela @ fator
    if spec.is_even:
        coeficientes[1::2] = 0.0
    energia = math.fsum(regra.dx_weights * np.exp(-x * x) * valores ** 2)
    return coeficientes, energia


def hermite_coefficients(potential, J: int, harmonic: bool = False, constant: float = 0.0,
                         nodes: int = None, warn_tail: bool = True) -> HermiteCoefficients:
    """v_j = ∫ e^{-x²} V H_j dx / (√π 2^j j!) para V = [x²] + constante + q, j = 0..J"""
    if int(J) != J or J < 0 or J > COEFF_MAX_DEGREE:
        raise DomainError(f"grau J deve estar em 0..{COEFF_MAX_DEGREE}, recebido {J}")
    J = int(J)
    grau = max(J, 2)

    if potential is None:
        cq = np.zeros(grau + 1)
        energia_q = 0.0
    else:
        cq, energia_q = _coeficientes_perturbacao(potential, grau, nodes)

    # parte polinomial: constante·H_0 + x² = H_0/2 + H_2/4
    cp = np.zeros(grau + 1)
    cp[0] = (constant + (0.5 if harmonic else 0.0)) * math.exp(log_hermite_norm(0))
    if harmonic:
        cp[2] = 0.25 * math.exp(log_hermite_norm(2))

    total = cq + cp
    energia = energia_q + 2.0 * math.fsum(cp * cq) + math.fsum(cp ** 2)
    mantidos = total[:J + 1]
    cauda = max(0.0, energia - math.fsum(mantidos ** 2))
    if not math.isfinite(cauda):
        raise RangeOverflowError("energia dos coeficientes não é finita")
    if warn_tail and cauda > COEFF_TAIL_WARN:
        logger.warning("cauda dos coeficientes de Hermite acima de %.0e: %.3g (J=%d)",
                       COEFF_TAIL_WARN, cauda, J)

    normas = np.exp([log_hermite_norm(j) for j in range(J + 1)])
    return HermiteCoefficients(
        values=mantidos / normas,
        degree=J,
        tail_estimate=cauda,
        energy=energia,
    )

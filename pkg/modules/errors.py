"""
Módulo de Erros
Hierarquia de exceções numéricas do Espectro Hermite
"""


class NumericalError(Exception):
    """Erro base de todas as rotinas numéricas"""


class DomainError(NumericalError, ValueError):
    """Argumento fora do domínio da função"""


class DegreeTooLargeError(DomainError):
    """Grau acima do limite da recorrência não normalizada"""


class ConvergenceError(NumericalError):
    """Iteração não convergiu dentro do limite"""


class QuadratureError(NumericalError):
    """Regra de quadratura inválida ou insuficiente"""


class RangeOverflowError(NumericalError, OverflowError):
    """Valor não representável em ponto flutuante"""


class PotentialSpecError(NumericalError, ValueError):
    """Especificação de potencial inválida"""

    def __init__(self, mensagem: str, token: str = None):
        super().__init__(mensagem)
        self.token = token


class UnboundedError(NumericalError):
    """Supremo infinito (q_m = +inf)"""


class HypothesisError(NumericalError):
    """Hipótese de uma desigualdade violada"""


class ResolutionError(NumericalError):
    """Refinamento da malha mudou os autovalores além da tolerância"""


class CounterexampleError(NumericalError):
    """Busca do contraexemplo atingiu o piso de delta"""

    def __init__(self, mensagem: str, diagnostics: dict = None):
        super().__init__(mensagem)
        self.diagnostics = diagnostics or {}


class ReportIOError(NumericalError, OSError):
    """Falha ao gravar relatório"""

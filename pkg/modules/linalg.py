"""
Módulo de Álgebra Linear
Autovalores de matrizes simétricas: QL implícito, Householder e Jacobi cíclico
"""
import logging
import math

import numpy as np

from config.settings import JACOBI_MAX_SIZE, JACOBI_MAX_SWEEPS, QL_MAX_ITER
from modules.errors import ConvergenceError

logger = logging.getLogger(__name__)

# ==================== MATRIZ TRIDIAGONAL ====================

def tridiagonal_ql(diagonal, offdiagonal, first_row: bool = False,
                   max_iter: int = QL_MAX_ITER):
    """Autovalores de uma tridiagonal simétrica por QL implícito com deslocamento de Wilkinson.

    `offdiagonal[i]` acopla as posições i e i+1. Com `first_row=True` também
    devolve a primeira componente de cada autovetor normalizado (Golub–Welsch).
    Resultado em ordem crescente.
    """
    d = [float(v) for v in diagonal]
    n = len(d)
    e = [float(v) for v in offdiagonal] + [0.0]
    if len(e) != n:
        raise ValueError("offdiagonal deve ter len(diagonal) - 1 elementos")

    z = None
    if first_row:
        z = [0.0] * n
        if n:
            z[0] = 1.0

    for l in range(n):
        iteracoes = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            if iteracoes >= max_iter:
                raise ConvergenceError(
                    f"QL implícito não convergiu para o autovalor {l} em {max_iter} iterações"
                )
            iteracoes += 1

            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            subfluxo = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    subfluxo = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if z is not None:
                    f = z[i + 1]
                    z[i + 1] = s * z[i] + c * f
                    z[i] = c * z[i] - s * f
            if subfluxo:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    valores = np.array(d)
    ordem = np.argsort(valores, kind="stable")
    if z is None:
        return valores[ordem]
    return valores[ordem], np.array(z)[ordem]


def householder_tridiagonalize(matrix):
    """Reduz uma matriz simétrica à forma tridiagonal (diagonal, subdiagonal)"""
    a = np.array(matrix, dtype=float, copy=True)
    n = a.shape[0]
    for k in range(n - 2):
        x = a[k + 1:, k]
        norma = np.linalg.norm(x)
        if norma == 0.0 or np.linalg.norm(x[1:]) == 0.0:
            continue
        alfa = -math.copysign(norma, x[0])
        v = x.copy()
        v[0] -= alfa
        v /= np.linalg.norm(v)
        bloco = a[k + 1:, k:]
        bloco -= 2.0 * np.outer(v, v @ bloco)
        bloco = a[k:, k + 1:]
        bloco -= 2.0 * np.outer(bloco @ v, v)
    return np.diag(a).copy(), np.diag(a, -1).copy()

# ==================== MATRIZ DENSA ====================

def jacobi_eigenvalues(matrix, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Autovalores por rotações de Jacobi cíclicas (ordem crescente)"""
    a = np.array(matrix, dtype=float, copy=True)
    n = a.shape[0]
    escala = np.linalg.norm(a)
    if n == 0:
        return np.array([])
    limite = max(n, 10) * np.finfo(float).eps * escala

    for varredura in range(max_sweeps):
        fora = np.linalg.norm(a - np.diag(np.diag(a)))
        if fora <= limite:
            logger.debug("Jacobi convergiu em %d varreduras (n=%d)", varredura, n)
            return np.sort(np.diag(a))
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300 or abs(apq) < 1e-18 * (abs(a[p, p]) + abs(a[q, q])):
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q]
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                lin_p = a[p, :].copy()
                lin_q = a[q, :]
                a[p, :] = c * lin_p - s * lin_q
                a[q, :] = s * lin_p + c * lin_q
                a[p, q] = a[q, p] = 0.0

    raise ConvergenceError(f"Jacobi não convergiu em {max_sweeps} varreduras (n={n})")


def inverse_iteration(matrix, targets, max_iter: int = 3, tol: float = 1e-10) -> np.ndarray:
    """Autovetores normalizados (um por coluna) para autovalores já conhecidos"""
    a = np.asarray(matrix, dtype=float)
    n = a.shape[0]
    escala = max(float(np.linalg.norm(a, ord=np.inf)), 1.0)
    vetores = np.empty((n, len(targets)))
    for i, theta in enumerate(targets):
        deslocamento = 1e3 * np.finfo(float).eps * escala
        x = np.full(n, 1.0 / math.sqrt(n))
        for _ in range(max_iter):
            deslocada = a - (theta - deslocamento) * np.eye(n)
            try:
                x = np.linalg.solve(deslocada, x)
            except np.linalg.LinAlgError:
                deslocamento *= 1e3
                continue
            x /= np.linalg.norm(x)
            if np.linalg.norm(a @ x - theta * x) <= tol * escala:
                break
        else:
            raise ConvergenceError(
                f"iteração inversa não convergiu para o autovalor {theta:.6g} (n={n})"
            )
        vetores[:, i] = x
    return vetores


def symmetric_eigenvalues(matrix):
    """Autovalores de matriz simétrica: Jacobi até JACOBI_MAX_SIZE, Householder + QL acima"""
    a = np.asarray(matrix, dtype=float)
    if a.shape[0] <= JACOBI_MAX_SIZE:
        return jacobi_eigenvalues(a)
    diagonal, sub = householder_tridiagonalize(a)
    return tridiagonal_ql(diagonal, sub)

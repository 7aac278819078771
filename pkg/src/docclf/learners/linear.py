"""Linear learners: logistic regression, hinge-loss SGD and a batch linear SVM.

Binary problems use a single weight vector (``coef_`` has one row); with
``K > 2`` classes logistic regression is multinomial, while SGD and SVM keep
one one-vs-rest vector per class and predict by the largest margin.
"""

from __future__ import annotations

import warnings

import numpy as np
import scipy.sparse as sp
from sklearn.exceptions import ConvergenceWarning

from ._base import DocClassifier, check_param, sigmoid, softmax


def logistic_loss_grad(coef, intercept, X, y, alpha):
    """Mean cross-entropy plus ``alpha / 2 * ||coef||^2`` and its gradient.

    ``coef`` has one row for the binary (sigmoid) model, else one row per
    class (softmax). Returns ``(loss, grad_coef, grad_intercept)``.
    """
    n = X.shape[0]
    Z = np.asarray(X @ coef.T) + intercept
    if coef.shape[0] == 1:
        z = Z[:, 0]
        # log(1 + e^z) - y z, computed stably
        loss = np.mean(np.logaddexp(0.0, z) - y * z)
        resid = (sigmoid(z) - y)[:, None]
    else:
        Zs = Z - Z.max(axis=1, keepdims=True)
        log_norm = np.log(np.exp(Zs).sum(axis=1))
        loss = np.mean(log_norm - Zs[np.arange(n), y])
        resid = np.exp(Zs - log_norm[:, None])
        resid[np.arange(n), y] -= 1.0
    loss += 0.5 * alpha * float(np.sum(coef * coef))
    grad_coef = np.asarray(X.T @ resid).T / n + alpha * coef
    grad_intercept = resid.mean(axis=0)
    return loss, grad_coef, grad_intercept


class _LinearModel(DocClassifier):
    def decision_function(self, X):
        X = self._check_predict_input(X)
        return np.asarray(X @ self.coef_.T) + self.intercept_

    def _margins(self, X):
        scores = self.decision_function(X)
        if scores.shape[1] == 1:
            return np.hstack([np.zeros_like(scores), scores])
        return scores

    def _targets(self, y):
        """+1 / -1 targets, one column per weight vector."""
        K = len(self.classes_)
        if K == 2:
            return np.where(y == 1, 1.0, -1.0)[:, None]
        Y = -np.ones((len(y), K))
        Y[np.arange(len(y)), y] = 1.0
        return Y


class LogisticRegression(_LinearModel):
    """Full-batch gradient descent from zero weights with a fixed step size.

    Stops when the gradient infinity-norm drops below ``tol``; otherwise
    ``converged_`` is False and a ``ConvergenceWarning`` is emitted.
    """

    family = "logistic_regression"

    def __init__(self, learning_rate=0.5, alpha=1e-4, max_iter=500, tol=1e-4):
        self.learning_rate = learning_rate
        self.alpha = alpha
        self.max_iter = max_iter
        self.tol = tol

    def _validate_params(self):
        check_param("learning_rate", self.learning_rate, low=0, strict=True)
        check_param("alpha", self.alpha, low=0)
        check_param("max_iter", self.max_iter, low=0, integer=True)
        check_param("tol", self.tol, low=0)

    def _fit(self, X, y):
        K = len(self.classes_)
        rows = 1 if K == 2 else K
        coef = np.zeros((rows, X.shape[1]))
        intercept = np.zeros(rows)
        self.converged_ = False
        self.n_iter_ = 0
        for it in range(self.max_iter + 1):
            _, g_coef, g_int = logistic_loss_grad(coef, intercept, X, y, self.alpha)
            g_norm = max(np.abs(g_coef).max(initial=0.0), np.abs(g_int).max())
            if g_norm < self.tol:
                self.converged_ = True
                break
            if it == self.max_iter:
                break
            coef -= self.learning_rate * g_coef
            intercept -= self.learning_rate * g_int
            self.n_iter_ = it + 1
        if not self.converged_ and self.max_iter > 0:
            warnings.warn(
                f"logistic regression did not converge in {self.max_iter} iterations",
                ConvergenceWarning,
                stacklevel=3,
            )
        self.coef_, self.intercept_ = coef, intercept

    def _proba(self, X):
        scores = self.decision_function(X)
        if scores.shape[1] == 1:
            p = sigmoid(scores[:, 0])
            return np.column_stack([1.0 - p, p])
        return softmax(scores)


class SGDClassifier(_LinearModel):
    """Hinge loss with L2 penalty, one stochastic step per sample.

    Step size ``eta0 / (1 + alpha * eta0 * t)`` with ``t`` counting updates.
    Rows are reshuffled every epoch from ``random_state``. Probabilities are
    a softmax over margins and are not calibrated.
    """

    family = "sgd"

    def __init__(self, eta0=0.1, alpha=1e-4, n_epochs=20, random_state=0):
        self.eta0 = eta0
        self.alpha = alpha
        self.n_epochs = n_epochs
        self.random_state = random_state

    def _validate_params(self):
        check_param("eta0", self.eta0, low=0, strict=True)
        check_param("alpha", self.alpha, low=0)
        check_param("n_epochs", self.n_epochs, low=1, integer=True)

    def _fit(self, X, y):
        Y = self._targets(y)
        rows = Y.shape[1]
        # coef = scale * U keeps the per-step shrinkage O(1)
        U = np.zeros((rows, X.shape[1]))
        scale = 1.0
        intercept = np.zeros(rows)
        rng = np.random.default_rng(self.random_state)
        indptr, indices, data = X.indptr, X.indices, X.data
        t = 0
        for _ in range(self.n_epochs):
            for i in rng.permutation(X.shape[0]):
                eta = self.eta0 / (1.0 + self.alpha * self.eta0 * t)
                lo, hi = indptr[i], indptr[i + 1]
                idx, vals = indices[lo:hi], data[lo:hi]
                margins = scale * (U[:, idx] @ vals) + intercept
                scale *= 1.0 - eta * self.alpha
                active = Y[i] * margins < 1.0
                if active.any():
                    step = eta * Y[i, active]
                    U[np.ix_(active, idx)] += np.outer(step / scale, vals)
                    intercept[active] += step
                if scale < 1e-9:
                    U *= scale
                    scale = 1.0
                t += 1
        self.coef_ = U * scale
        self.intercept_ = intercept
        self.t_ = t

    def _proba(self, X):
        return softmax(self._margins(X))


class LinearSVC(_LinearModel):
    """Primal linear SVM by deterministic full-batch subgradient descent.

    Step ``1 / (alpha * t)`` and projection onto the ball of radius
    ``1 / sqrt(alpha)`` as in Pegasos, but every step uses all rows. The
    intercept is an extra constant feature and is regularized with the
    weights. Probabilities are per-class sigmoids of the margins,
    renormalized.
    """

    family = "svm"

    def __init__(self, alpha=1e-3, max_iter=1000):
        self.alpha = alpha
        self.max_iter = max_iter

    def _validate_params(self):
        check_param("alpha", self.alpha, low=0, strict=True)
        check_param("max_iter", self.max_iter, low=1, integer=True)

    def _fit(self, X, y):
        Y = self._targets(y)
        n = X.shape[0]
        Xa = sp.hstack([X, np.ones((n, 1))], format="csr")
        W = np.zeros((Y.shape[1], Xa.shape[1]))
        radius = 1.0 / np.sqrt(self.alpha)
        for t in range(1, self.max_iter + 1):
            margins = np.asarray(Xa @ W.T)
            A = np.where(Y * margins < 1.0, Y, 0.0)
            grad = self.alpha * W - np.asarray(Xa.T @ A).T / n
            W -= grad / (self.alpha * t)
            norms = np.sqrt((W * W).sum(axis=1))
            shrink = np.minimum(1.0, radius / np.where(norms > 0, norms, 1.0))
            W *= shrink[:, None]
        self.coef_ = W[:, :-1].copy()
        self.intercept_ = W[:, -1].copy()

    def _proba(self, X):
        scores = self.decision_function(X)
        if scores.shape[1] == 1:
            p = sigmoid(scores[:, 0])
            return np.column_stack([1.0 - p, p])
        s = sigmoid(scores)
        return s / s.sum(axis=1, keepdims=True)

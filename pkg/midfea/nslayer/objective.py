#===============================================================================
#
#  MidFea mid-level feature learning tools
#
#  Copyright (c) 2021  MidFea developers
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
#
#===============================================================================

"""
The Neuron-Selectivity objective and its gradients.

For data ``X`` (one sample per column), activations ``H`` and a model with
decoder ``D`` and encoder ``(W, b)``::

    |X - D H|^2 + alpha |H - sigma(W X + b)|^2
        + sum over classes c of (  lambda |H_c|_21 + beta |H_c - mean(H_c)|^2
                                 + gamma |H_c^T H_/c|^2 )

where ``H_c`` holds the columns of class ``c``, ``H_/c`` all other columns
and ``mean(H_c)`` repeats the mean column of ``H_c``. Norms are Frobenius
except the row-wise ``l21`` norm.

Gradients with respect to ``H_c`` replace each row norm ``|r|`` with
``sqrt(|r|^2 + eps^2)`` so that they stay finite on zero rows.
"""

#===============================================================================

from collections import namedtuple

#===============================================================================

import numpy as np

#===============================================================================

from midfea.exceptions import InvalidArgumentError
from midfea.numerics import l21_norm

from .model import activations

#===============================================================================

ObjectiveTerms = namedtuple('ObjectiveTerms', 'reconstruction encoding sparsity similarity incoherence')

#===============================================================================

def class_indices(labels, classes=None):
#=======================================
    """
    :param labels: class indices ``0 .. C-1``, one per sample
    :param classes: the number of classes ``C``, by default one more than the
                    largest label
    :returns: for each class, the indices of its samples
    :raises InvalidArgumentError: if labels are negative or not integers, or
                                  a class in ``0 .. C-1`` has no samples
    """
    labels = np.asarray(labels)
    if labels.ndim != 1 or labels.size == 0:
        raise InvalidArgumentError('Labels must be a non-empty vector')
    if not np.issubdtype(labels.dtype, np.integer):
        if not np.all(np.mod(labels, 1) == 0):
            raise InvalidArgumentError('Labels must be integer class indices')
        labels = labels.astype(np.int64)
    if labels.min() < 0:
        raise InvalidArgumentError('Labels must be non-negative class indices')
    if classes is None:
        classes = int(labels.max()) + 1
    elif labels.max() >= classes:
        raise InvalidArgumentError('Label {} is out of range for {} classes'.format(labels.max(), classes))
    indices = [np.flatnonzero(labels == c) for c in range(classes)]
    empty = [c for c, idx in enumerate(indices) if len(idx) == 0]
    if empty:
        raise InvalidArgumentError('Classes {} have no samples; labels must run from 0 to {} without gaps'
                                   .format(empty, classes - 1))
    return indices

def _check_shapes(X, labels, H, model):
    if X.ndim != 2 or H.ndim != 2:
        raise InvalidArgumentError('Data and activations must be matrices')
    if X.shape[0] != model.p or H.shape[0] != model.d:
        raise InvalidArgumentError('Data ({}) or activations ({}) do not fit a {} by {} layer'
                                   .format(X.shape, H.shape, model.p, model.d))
    if X.shape[1] != H.shape[1] or len(labels) != X.shape[1]:
        raise InvalidArgumentError('Data, activations and labels disagree on the number of samples')

def smoothed_l21(m, eps):
#========================
    """
    Sum over rows of ``sqrt(|row|^2 + eps^2)``.
    """
    return float(np.sum(np.sqrt(np.sum(m*m, axis=1) + eps*eps)))

#===============================================================================

def objective_terms(X, labels, H, model):
#========================================
    """
    The unweighted terms of the objective.

    :rtype: ObjectiveTerms
    """
    X = np.asarray(X, dtype=np.float64)
    H = np.asarray(H, dtype=np.float64)
    _check_shapes(X, labels, H, model)
    residual = X - model.D @ H
    encoding = H - activations(X, model.W, model.b)
    sparsity = similarity = incoherence = 0.0
    everything = np.arange(H.shape[1])
    for idx in class_indices(labels):
        Hc = H[:, idx]
        centred = Hc - Hc.mean(axis=1, keepdims=True)
        others = H[:, np.setdiff1d(everything, idx, assume_unique=True)]
        cross = Hc.T @ others
        sparsity += l21_norm(Hc)
        similarity += float(np.sum(centred*centred))
        incoherence += float(np.sum(cross*cross))
    return ObjectiveTerms(float(np.sum(residual*residual)), float(np.sum(encoding*encoding)),
                          sparsity, similarity, incoherence)

def objective(X, labels, H, model):
#==================================
    """
    The value of the Neuron-Selectivity objective, with the exact ``l21`` norm.

    :raises InvalidArgumentError: if shapes or labels are inconsistent
    """
    terms = objective_terms(X, labels, H, model)
    hyper = model.hyper
    return (terms.reconstruction + hyper.alpha*terms.encoding + hyper.lam*terms.sparsity
          + hyper.beta*terms.similarity + hyper.gamma*terms.incoherence)

#===============================================================================

def grad_D(X, H, D):
#===================
    """
    Gradient of ``|X - D H|^2`` with respect to ``D``.
    """
    return 2.0*(D @ H - X) @ H.T

#===============================================================================

def class_block(c, X, labels, H):
#================================
    """
    :returns: ``(X_c, H_c, H_/c, mean(H_c))`` for class ``c``
    """
    classes = class_indices(labels)
    if c < 0 or c >= len(classes):
        raise InvalidArgumentError('No class {} among {} classes'.format(c, len(classes)))
    idx = classes[c]
    others = np.setdiff1d(np.arange(H.shape[1]), idx, assume_unique=True)
    Hc = H[:, idx]
    return X[:, idx], Hc, H[:, others], np.repeat(Hc.mean(axis=1, keepdims=True), len(idx), axis=1)

def class_block_objective(Hc, c, X, labels, H, model, H_mean=None):
#==================================================================
    """
    The part of the objective that an update of ``H_c`` minimises, with
    ``H_/c`` and the class mean held fixed and smoothed row norms.

    :param Hc: the trial value of ``H_c``
    :param H_mean: the fixed class mean; by default that of ``H_c`` in ``H``
    """
    Xc, _, others, mean = class_block(c, X, labels, H)
    if H_mean is not None:
        mean = H_mean
    hyper = model.hyper
    residual = Xc - model.D @ Hc
    encoding = Hc - activations(Xc, model.W, model.b)
    centred = Hc - mean
    cross = others.T @ Hc
    return (float(np.sum(residual*residual)) + hyper.alpha*float(np.sum(encoding*encoding))
          + hyper.beta*float(np.sum(centred*centred)) + hyper.gamma*float(np.sum(cross*cross))
          + hyper.lam*smoothed_l21(Hc, hyper.eps_row))

def grad_Hc(c, X, labels, H, model, H_mean=None):
#================================================
    """
    Gradient of :func:`class_block_objective` at the current ``H_c``.

    Stacking the fitted targets ``G = [X_c; sqrt(alpha) sigma(W X_c + b);
    sqrt(beta) mean(H_c); 0]`` against ``Q = [D; sqrt(alpha) I; sqrt(beta) I;
    sqrt(gamma) H_/c^T]``, the gradient is::

        -2 Q^T G + 2 Q^T Q H_c + lambda C H_c

    with ``C`` diagonal, ``C[i, i] = 1/sqrt(|H_c row i|^2 + eps^2)``.
    """
    Xc, Hc, others, mean = class_block(c, X, labels, H)
    if H_mean is not None:
        mean = H_mean
    hyper = model.hyper
    D = model.D
    encoded = activations(Xc, model.W, model.b)
    QtG = D.T @ Xc + hyper.alpha*encoded + hyper.beta*mean
    QtQ = D.T @ D + (hyper.alpha + hyper.beta)*np.eye(D.shape[1]) + hyper.gamma*(others @ others.T)
    row_scale = 1.0/np.sqrt(np.sum(Hc*Hc, axis=1) + hyper.eps_row**2)
    return -2.0*QtG + 2.0*QtQ @ Hc + hyper.lam*row_scale[:, np.newaxis]*Hc

#===============================================================================

def grad_Wb(X, H, W, b, alpha=1.0):
#==================================
    """
    Gradients of ``alpha |H - sigma(W X + b 1^T)|^2`` with respect to ``W``
    and ``b``.

    :returns: ``(grad_W, grad_b)``
    """
    S = activations(X, W, b)
    R = 2.0*alpha*(S - H)*S*(1.0 - S)
    return R @ X.T, R.sum(axis=1)

#===============================================================================

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
Alternating block descent on the Neuron-Selectivity objective.

Each epoch updates the decoder, then the activations of each class in turn,
then the encoder. Every update is a gradient step whose length is found by
backtracking, and a step is only taken when the objective goes down, so the
recorded objective never increases.
"""

#===============================================================================

from collections import namedtuple

#===============================================================================

import numpy as np
import scipy.linalg

#===============================================================================

from midfea import EPS_NORM
from midfea.exceptions import InvalidArgumentError, NumericFailure
from midfea.numerics import matrix
from midfea.utils import ProgressBar, log

from .initialise import init_classwise, init_random
from .model import NSHyper, NSModel, activations
from .objective import class_indices, grad_D, grad_Hc, grad_Wb, objective

#===============================================================================

ARMIJO = 1e-4           #: Sufficient decrease, as a fraction of the first-order change

CLASSWISE = 'classwise'
RANDOM = 'random'

INIT_MODES = [CLASSWISE, RANDOM]

#===============================================================================

TrainingResult = namedtuple('TrainingResult', 'model activations trace')

class TrainingTrace(object):
    """
    Objective values seen while training.

    ``epochs[0]`` is the initial objective and ``epochs[n]`` the objective
    after epoch ``n``; ``steps`` has the objective after every accepted step.
    """
    def __init__(self):
        self.__epochs = []
        self.__steps = []

    @property
    def epochs(self):
        return self.__epochs

    @property
    def steps(self):
        return self.__steps

    def epoch(self, value):
    #======================
        self.__epochs.append(float(value))

    def step(self, value):
    #=====================
        self.__steps.append(float(value))

#===============================================================================

class LineSearch(object):
    """
    Backtracking from a step of at most ``ls_init``, halving (by ``ls_shrink``)
    up to ``ls_max`` times.

    A search starts from twice the step last accepted for the same block.
    """
    def __init__(self, hyper):
        self.__hyper = hyper
        self.__last_step = {}
        self.epoch = 0

    def search(self, block, propose, evaluate, current, slope):
    #==========================================================
        """
        :param block: names the variable being updated
        :param propose: returns the candidate for a step length
        :param evaluate: the objective at a candidate
        :param current: the objective now
        :param slope: squared norm of the gradient
        :returns: ``(candidate, value)``, or ``(None, current)`` when no step
                  decreases the objective
        :raises NumericFailure: if every trial value is non-finite
        """
        hyper = self.__hyper
        step = min(hyper.ls_init, 2.0*self.__last_step.get(block, hyper.ls_init))
        finite = False
        for _ in range(hyper.ls_max + 1):
            candidate = propose(step)
            value = evaluate(candidate)
            if np.isfinite(value):
                finite = True
                if value < current - ARMIJO*step*slope:
                    self.__last_step[block] = step
                    return candidate, value
            step *= hyper.ls_shrink
        if not finite:
            raise NumericFailure('Objective is not finite in epoch {} when updating {} (smallest step {:g})'
                                 .format(self.epoch, block, step/hyper.ls_shrink))
        return None, current

#===============================================================================

def renormalise_columns(D, previous):
#====================================
    """
    Scale columns to unit length, keeping the previous column where a new
    one has vanished.
    """
    norms = np.sqrt(np.sum(D*D, axis=0))
    vanished = norms < EPS_NORM
    D = np.where(vanished, previous, D/np.where(vanished, 1.0, norms))
    return D

def analytic_decoder(X, H, ridge):
#=================================
    """
    Least squares decoder ``X H^T (H H^T + ridge I)^-1``.

    :raises numpy.linalg.LinAlgError: if the system is singular
    """
    gram = H @ H.T + ridge*np.eye(H.shape[0])
    return scipy.linalg.solve(gram, H @ X.T, assume_a='pos').T

#===============================================================================

class Trainer(object):
    def __init__(self, X, labels, hyper, classes):
        self.__X = X
        self.__labels = labels
        self.__hyper = hyper
        self.__classes = classes
        self.__search = LineSearch(hyper)
        self.__trace = TrainingTrace()

    @property
    def trace(self):
        return self.__trace

    def __objective(self, D, W, b, H):
        try:
            model = NSModel(D, W, b, self.__hyper)
        except InvalidArgumentError:
            return np.inf       # non-finite parameters
        return objective(self.__X, self.__labels, H, model)

    def __encoding_loss(self, W, b, H):
        diff = H - activations(self.__X, W, b)
        return self.__hyper.alpha*float(np.sum(diff*diff))

    def fit_encoder(self, W, b, H, steps):
    #=====================================
        """
        Line-searched gradient steps on ``alpha |H - sigma(W X + b)|^2``.
        """
        X = self.__X
        alpha = self.__hyper.alpha if self.__hyper.alpha > 0.0 else 1.0
        loss = lambda Wb: alpha*float(np.sum((H - activations(X, *Wb))**2))
        current = loss((W, b))
        for _ in range(steps):
            gW, gb = grad_Wb(X, H, W, b, alpha)
            slope = float(np.sum(gW*gW) + np.sum(gb*gb))
            if slope == 0.0:
                break
            candidate, value = self.__search.search('W,b',
                lambda t: (W - t*gW, b - t*gb), loss, current, slope)
            if candidate is None:
                break
            (W, b), current = candidate, value
        return W, b

    def epoch(self, epoch, D, W, b, H, current):
    #===========================================
        hyper = self.__hyper
        X = self.__X
        trace = self.__trace
        self.__search.epoch = epoch

        # Decoder
        updated = False
        if hyper.analytic_d:
            try:
                candidate = renormalise_columns(analytic_decoder(X, H, hyper.ridge), D)
                value = self.__objective(candidate, W, b, H)
                if value <= current:
                    D, current, updated = candidate, value, True
                    trace.step(current)
            except (np.linalg.LinAlgError, ValueError) as err:
                log.debug('Analytic decoder update failed ({}), using a gradient step'.format(err))
        if not updated:
            G = grad_D(X, H, D)
            slope = float(np.sum(G*G))
            if slope > 0.0:
                candidate, value = self.__search.search('D',
                    lambda t: renormalise_columns(D - t*G, D),
                    lambda Dt: self.__objective(Dt, W, b, H), current, slope)
                if candidate is not None:
                    D, current = candidate, value
                    trace.step(current)

        # Activations, class by class, with each class mean fixed for its block
        model = NSModel(D, W, b, hyper)
        for c, idx in enumerate(self.__classes):
            H_mean = np.repeat(H[:, idx].mean(axis=1, keepdims=True), len(idx), axis=1)
            for _ in range(hyper.inner):
                G = grad_Hc(c, X, self.__labels, H, model, H_mean=H_mean)
                slope = float(np.sum(G*G))
                if slope == 0.0:
                    break
                def propose(t):
                    trial = H.copy()
                    trial[:, idx] -= t*G
                    return trial
                candidate, value = self.__search.search('H_{}'.format(c), propose,
                    lambda Ht: self.__objective(D, W, b, Ht), current, slope)
                if candidate is None:
                    break
                H, current = candidate, value
                trace.step(current)

        # Encoder
        if hyper.alpha > 0.0:
            before = self.__encoding_loss(W, b, H)
            W, b = self.fit_encoder(W, b, H, 1)
            after = self.__encoding_loss(W, b, H)
            if after < before:
                current = self.__objective(D, W, b, H)
                trace.step(current)
        else:
            W, b = self.fit_encoder(W, b, H, 1)

        return D, W, b, H, current

#===============================================================================

def train(X, labels, hyper=None, init_mode=CLASSWISE, rng=None, classes=None):
#=============================================================================
    """
    Train a Neuron-Selectivity layer.

    :param X: training features, one sample per column
    :param labels: class index of each sample
    :param hyper: an :class:`~midfea.nslayer.model.NSHyper`
    :param init_mode: ``'classwise'`` or ``'random'``
    :param rng: a :class:`~midfea.numerics.rng.SeededRng`
    :param classes: number of classes, by default one more than the largest label
    :rtype: TrainingResult
    :raises NumericFailure: if the objective becomes non-finite
    """
    if hyper is None:
        hyper = NSHyper()
    if rng is None:
        raise InvalidArgumentError('NS training needs a random stream')
    if init_mode not in INIT_MODES:
        raise InvalidArgumentError('Unknown initialisation "{}", expected one of {}'
                                   .format(init_mode, ', '.join(INIT_MODES)))
    X = np.array(matrix(X, 'Training features'))
    labels = np.asarray(labels, dtype=np.int64)
    indices = class_indices(labels, classes)
    if X.shape[1] != len(labels):
        raise InvalidArgumentError('{} samples but {} labels'.format(X.shape[1], len(labels)))
    if X.shape[1] < len(indices):
        raise InvalidArgumentError('{} samples are too few for {} classes'
                                   .format(X.shape[1], len(indices)))

    trainer = Trainer(X, labels, hyper, indices)
    init_rng = rng.derive('ns-init')
    if init_mode == CLASSWISE:
        D, H = init_classwise(X, labels, hyper, init_rng)
        W = np.zeros((D.shape[1], X.shape[0]))
        b = np.zeros(D.shape[1])
        W, b = trainer.fit_encoder(W, b, H, hyper.pretrain_steps)
    else:
        D, H, W, b = init_random(X.shape[0], X.shape[1], hyper, init_rng, classes=len(indices))
    log.info('Training NS layer of {} neurons on {} samples from {} classes'
             .format(D.shape[1], X.shape[1], len(indices)))

    current = objective(X, labels, H, NSModel(D, W, b, hyper))
    if not np.isfinite(current):
        raise NumericFailure('Initial objective is not finite')
    trainer.trace.epoch(current)
    trainer.trace.step(current)
    with ProgressBar(total=hyper.epochs, unit='epoch', desc='NS training') as progress:
        for epoch in range(1, hyper.epochs + 1):
            previous = current
            D, W, b, H, current = trainer.epoch(epoch, D, W, b, H, current)
            if not np.isfinite(current):
                raise NumericFailure('Objective is not finite after epoch {}'.format(epoch))
            trainer.trace.epoch(current)
            progress.update(1)
            progress.set_postfix(objective='{:.6g}'.format(current))
            if previous - current <= hyper.tol*max(abs(previous), EPS_NORM):
                log.info('NS training converged after {} epochs, objective {:.6g}'.format(epoch, current))
                break
    return TrainingResult(NSModel(D, W, b, hyper), matrix(H, 'Activations'), trainer.trace)

#===============================================================================

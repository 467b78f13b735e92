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

from dataclasses import asdict, dataclass, fields, replace

#===============================================================================

import numpy as np
from scipy.special import expit

#===============================================================================

from midfea.exceptions import InvalidArgumentError
from midfea.numerics import matrix, vector

#===============================================================================

NEURONS_PER_CLASS = 20      #: Neurons per class when no count is given

#===============================================================================

@dataclass(frozen=True)
class NSHyper:
    """
    Weights of the Neuron-Selectivity objective and optimiser controls.

    ``d = 0`` means :data:`NEURONS_PER_CLASS` neurons for every class.
    """
    alpha: float = 1.0
    beta: float = 0.1
    gamma: float = 0.1
    lam: float = 0.1
    d: int = 0
    epochs: int = 200
    tol: float = 1e-5
    inner: int = 3
    ls_init: float = 0.1
    ls_shrink: float = 0.5
    ls_max: int = 30
    eps_row: float = 1e-8
    analytic_d: bool = False
    ridge: float = 1e-8
    pretrain_steps: int = 50

    def __post_init__(self):
        for name in ['alpha', 'beta', 'gamma', 'lam', 'tol', 'eps_row', 'ridge']:
            if not getattr(self, name) >= 0.0:
                raise InvalidArgumentError('NS parameter {} must be non-negative'.format(name))
        if self.d < 0:
            raise InvalidArgumentError('NS neuron count must be non-negative')
        if self.epochs < 1 or self.inner < 1:
            raise InvalidArgumentError('NS training needs at least one epoch and inner step')
        if not (0.0 < self.ls_shrink < 1.0) or self.ls_init <= 0.0 or self.ls_max < 0:
            raise InvalidArgumentError('Invalid line search settings')
        if self.pretrain_steps < 0:
            raise InvalidArgumentError('Pre-training steps must be non-negative')

    def neurons(self, classes):
    #==========================
        d = self.d if self.d > 0 else NEURONS_PER_CLASS*classes
        if d < classes:
            raise InvalidArgumentError('{} neurons are too few for {} classes'.format(d, classes))
        return d

    def with_values(self, **kwds):
    #=============================
        return replace(self, **kwds)

    def as_dict(self):
    #=================
        return asdict(self)

    @classmethod
    def from_dict(cls, values):
    #==========================
        """
        :param values: a dictionary of field names to values, which may be strings
        """
        known = {f.name: f.type for f in fields(cls)}
        kwds = {}
        for key, value in values.items():
            if key not in known:
                raise InvalidArgumentError('Unknown NS parameter: {}'.format(key))
            kind = known[key]
            if kind in ['bool', bool]:
                kwds[key] = value if isinstance(value, bool) else str(value).lower() in ['1', 'true', 'yes']
            elif kind in ['int', int]:
                kwds[key] = int(value)
            else:
                kwds[key] = float(value)
        return cls(**kwds)

#===============================================================================

class NSModel(object):
    """
    A trained Neuron-Selectivity layer.

    :param D: the ``p x d`` linear decoder
    :param W: the ``d x p`` encoder weights
    :param b: the encoder bias, of length ``d``
    :param hyper: the :class:`NSHyper` it was trained with
    """
    def __init__(self, D, W, b, hyper=None):
        D = matrix(D, 'Decoder')
        W = matrix(W, 'Encoder weights')
        b = vector(b, 'Encoder bias')
        if W.shape != (D.shape[1], D.shape[0]) or b.shape != (D.shape[1],):
            raise InvalidArgumentError('Decoder {}, encoder {} and bias {} do not agree'
                                       .format(D.shape, W.shape, b.shape))
        self.__D = D
        self.__W = W
        self.__b = b
        self.__hyper = hyper if hyper is not None else NSHyper()

    def __str__(self):
        return 'NSModel with {} neurons over {} inputs'.format(self.d, self.p)

    @property
    def D(self) -> np.ndarray:
        return self.__D

    @property
    def W(self) -> np.ndarray:
        return self.__W

    @property
    def b(self) -> np.ndarray:
        return self.__b

    @property
    def d(self) -> int:
        return self.__D.shape[1]

    @property
    def hyper(self) -> NSHyper:
        return self.__hyper

    @property
    def p(self) -> int:
        return self.__D.shape[0]

#===============================================================================

def activations(X, W, b):
#========================
    """
    ``sigma(W X + b 1^T)``, the logistic function applied element-wise.
    """
    return expit(W @ X + b[:, np.newaxis])

def encode(x, model):
#====================
    """
    :param x: a feature vector of length ``model.p`` (or a
              :class:`~midfea.midlevel.projection.MidFeature`)
    :returns: the neuron activations, each strictly inside ``(0, 1)`` unless
              saturated
    """
    x = np.asarray(getattr(x, 'values', x), dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != model.p:
        raise InvalidArgumentError('Feature of length {} given to a layer with {} inputs'
                                   .format(x.size, model.p))
    return expit(model.W @ x + model.b)

def infer_batch(X, model):
#=========================
    """
    Encode every column of ``X``.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != model.p:
        raise InvalidArgumentError('Features of dimension {} given to a layer with {} inputs'
                                   .format(X.shape[0] if X.ndim == 2 else X.shape, model.p))
    return activations(X, model.W, model.b)

#===============================================================================

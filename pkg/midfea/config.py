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
Run configuration.

A configuration file has one ``key = value`` per line; ``#`` starts a
comment. Keys not given take their default.
"""

#===============================================================================

from collections import namedtuple

#===============================================================================

from midfea import CODEBOOK_SIZE, FILTER_COUNT, FILTER_SIZE, KMEANS_ITERATIONS, PROJECTED_DIM
from midfea.classify.linear import CLF_EPOCHS, CLF_REGULARISATION
from midfea.exceptions import ConfigError, InvalidArgumentError
from midfea.midlevel import PartitionSpec
from midfea.nslayer import INIT_MODES, NSHyper
from midfea.numerics.rng import MAX_SEED

#===============================================================================

Option = namedtuple('Option', 'kind default valid description')

def _at_least(n):
    return lambda value: value >= n

def _non_negative(value):
    return value >= 0

def _partition(text):
    try:
        return str(PartitionSpec.parse(text))
    except InvalidArgumentError as err:
        raise ConfigError(str(err))

def _boolean(text):
    if text.lower() in ['1', 'true', 'yes', 'on']:
        return True
    elif text.lower() in ['0', 'false', 'no', 'off']:
        return False
    raise ValueError('not a boolean')

#===============================================================================

OPTIONS = {
    'filters.count':     Option(int,   FILTER_COUNT, _at_least(2), 'number of low-level filters'),
    'filters.size':      Option(int,   FILTER_SIZE,  _at_least(1), 'filter side in pixels'),
    'filters.patches':   Option(int,   200,          _at_least(1), 'patches sampled per training image'),
    'codebook.size':     Option(int,   CODEBOOK_SIZE, _at_least(2), 'number of VQ codewords'),
    'codebook.samples':  Option(int,   50000,        _at_least(2), 'most descriptors used to learn the codebook'),
    'vq.stride':         Option(int,   1,            _at_least(1), 'grid step between coded descriptors'),
    'pool.partition':    Option(_partition, 'pyramid:3', None,     'pyramid:L, grid:RxC or overlap:CELL,STRIDE'),
    'projection.dim':    Option(int,   PROJECTED_DIM, _at_least(1), 'dimension of mid-level features'),
    'seed':              Option(int,   1,            lambda n: 0 <= n <= MAX_SEED, 'random seed'),
    'kmeans.iterations': Option(int,   KMEANS_ITERATIONS, _at_least(1), 'most Lloyd iterations'),
    'ns.alpha':          Option(float, 1.0,          _non_negative, 'weight of the encoder residual'),
    'ns.beta':           Option(float, 0.1,          _non_negative, 'weight of within-class similarity'),
    'ns.gamma':          Option(float, 0.1,          _non_negative, 'weight of cross-class incoherence'),
    'ns.lambda':         Option(float, 0.1,          _non_negative, 'weight of row sparsity'),
    'ns.d':              Option(int,   0,            _non_negative, 'neurons, 0 for 20 per class'),
    'ns.epochs':         Option(int,   200,          _at_least(1), 'most training epochs'),
    'ns.tol':            Option(float, 1e-5,         _non_negative, 'relative objective decrease to stop at'),
    'ns.inner':          Option(int,   3,            _at_least(1), 'activation steps per class per epoch'),
    'ns.init':           Option(str,   'classwise',  lambda s: s in INIT_MODES, 'classwise or random'),
    'ns.analytic_d':     Option(_boolean, False,     None,         'solve for the decoder directly'),
    'clf.reg':           Option(float, CLF_REGULARISATION, lambda x: x > 0, 'classifier regularisation'),
    'clf.epochs':        Option(int,   CLF_EPOCHS,   _at_least(1), 'classifier iterations'),
}

#===============================================================================

class RunConfig(object):
    def __init__(self, values=None):
        self.__values = {key: option.default for key, option in OPTIONS.items()}
        if values is not None:
            for key, value in values.items():
                self.set(key, value)

    def __eq__(self, other):
        return isinstance(other, RunConfig) and self.as_dict() == other.as_dict()

    def __getitem__(self, key):
        if key not in self.__values:
            raise ConfigError('Unknown configuration key: {}'.format(key))
        return self.__values[key]

    def __str__(self):
        return ''.join('{} = {}\n'.format(key, self.__format(self.__values[key]))
                            for key in sorted(self.__values))

    @staticmethod
    def __format(value):
        if isinstance(value, bool):
            return 'true' if value else 'false'
        elif isinstance(value, float):
            return repr(value)
        return str(value)

    @property
    def partition(self):
        return PartitionSpec.parse(self.__values['pool.partition'])

    @property
    def seed(self) -> int:
        return self.__values['seed']

    @classmethod
    def parse(cls, text, source='<config>'):
    #=======================================
        """
        :raises ConfigError: for malformed lines, unknown keys or invalid values
        """
        config = cls()
        for line_number, line in enumerate(text.splitlines(), 1):
            line = line.split('#', 1)[0].strip()
            if line == '':
                continue
            key, sep, value = line.partition('=')
            if sep != '=':
                raise ConfigError('{}:{}: expected "key = value"'.format(source, line_number))
            try:
                config.set(key.strip(), value.strip())
            except ConfigError as err:
                raise ConfigError('{}:{}: {}'.format(source, line_number, err))
        return config

    @classmethod
    def load(cls, path):
    #===================
        try:
            with open(path, 'r') as fp:
                return cls.parse(fp.read(), str(path))
        except OSError as err:
            raise ConfigError('Cannot read configuration {}: {}'.format(path, err.strerror))

    def as_dict(self):
    #=================
        return dict(self.__values)

    def set(self, key, value):
    #=========================
        """
        Set a key from a typed value or its text form.
        """
        option = OPTIONS.get(key)
        if option is None:
            raise ConfigError('Unknown configuration key: {}'.format(key))
        try:
            if isinstance(value, str):
                converted = option.kind(value)
            elif isinstance(value, bool):
                if option.kind is not _boolean:
                    raise ValueError('not a boolean option')
                converted = value
            elif option.kind is float and isinstance(value, (int, float)):
                converted = float(value)
            elif option.kind is int and isinstance(value, int):
                converted = value
            else:
                raise ValueError('wrong type')
        except (TypeError, ValueError):
            raise ConfigError('Invalid value for {}: {}'.format(key, value))
        if option.valid is not None and not option.valid(converted):
            raise ConfigError('Value out of range for {}: {}'.format(key, value))
        self.__values[key] = converted

    def ns_hyper(self):
    #==================
        """
        :rtype: :class:`~midfea.nslayer.model.NSHyper`
        """
        return NSHyper(alpha=self['ns.alpha'], beta=self['ns.beta'], gamma=self['ns.gamma'],
                       lam=self['ns.lambda'], d=self['ns.d'], epochs=self['ns.epochs'],
                       tol=self['ns.tol'], inner=self['ns.inner'], analytic_d=self['ns.analytic_d'])

#===============================================================================

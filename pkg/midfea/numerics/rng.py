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

import zlib

#===============================================================================

import numpy as np

#===============================================================================

from midfea.exceptions import InvalidArgumentError

#===============================================================================

RNG_ALGORITHM = 'PCG64'

MAX_SEED = 2**64 - 1

#===============================================================================

class SeededRng(object):
    """
    A reproducible random stream.

    The stream is numpy's ``PCG64`` bit generator with its 128-bit state
    initialised from the seed by :class:`numpy.random.SeedSequence`. numpy
    guarantees the same stream on every platform for a given seed and bit
    generator, and all draws below use the generator's stable methods.

    Each step advances the 128-bit state ``s`` as the linear congruence::

        s <- (s * 0x2360ED051FC65DA44385DF649FCCF645 + inc) mod 2**128

    with ``inc`` an odd increment also fixed by the seed, and emits 64 bits by
    the XSL-RR permutation: the xor of the state's high and low halves,
    rotated right by the top six bits of the state.

    Independent sub-streams for pipeline stages come from :meth:`derive`,
    which hashes the stage name into the seed sequence's spawn key so that
    adding a stage never shifts the numbers another stage sees.

    :param seed: an unsigned 64-bit integer
    """
    def __init__(self, seed, spawn_key=()):
        seed = int(seed)
        if seed < 0 or seed > MAX_SEED:
            raise InvalidArgumentError('Seed must be an unsigned 64-bit integer')
        self.__seed = seed
        self.__spawn_key = tuple(spawn_key)
        self.__generator = np.random.Generator(np.random.PCG64(
                                np.random.SeedSequence(seed, spawn_key=self.__spawn_key)))

    def __str__(self):
        return 'SeededRng({}, {}{})'.format(RNG_ALGORITHM, self.__seed,
                    ''.join(':{}'.format(k) for k in self.__spawn_key))

    @property
    def algorithm(self):
        return RNG_ALGORITHM

    @property
    def generator(self):
        """
        :rtype: :class:`numpy.random.Generator`
        """
        return self.__generator

    @property
    def seed(self):
        return self.__seed

    def derive(self, name):
    #======================
        """
        :param name: a stage name, e.g. ``'filters'``
        :returns: A new :class:`SeededRng` independent of this one.
        """
        key = zlib.crc32(str(name).encode('utf-8'))
        return SeededRng(self.__seed, self.__spawn_key + (key,))

    def integers(self, low, high, size=None):
    #========================================
        return self.__generator.integers(low, high, size=size)

    def normal(self, scale, size):
    #=============================
        return self.__generator.normal(0.0, scale, size=size)

    def permutation(self, n):
    #========================
        return self.__generator.permutation(n)

    def sample_without_replacement(self, population, count):
    #=======================================================
        """
        :returns: ``count`` sorted distinct indices in ``range(population)``.
        """
        if count >= population:
            return np.arange(population)
        return np.sort(self.__generator.choice(population, size=count, replace=False))

    def seed_int(self):
    #==================
        """
        A 31-bit integer drawn from the stream, for libraries that take an
        integer ``random_state``.
        """
        return int(self.__generator.integers(0, 2**31 - 1))

    def uniform(self, low, high, size=None):
    #=======================================
        return self.__generator.uniform(low, high, size=size)

#===============================================================================

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
Numeric files.

A matrix file is the ASCII line ``MFEA-MAT 1``, the ASCII line
``<rows> <cols>``, then ``rows*cols`` little-endian 64-bit floats in row-major
order. A tensor file is ``MFEA-TEN 1``, ``<height> <width> <depth>`` and the
values with depth varying fastest.
"""

#===============================================================================

import numpy as np

#===============================================================================

from midfea.exceptions import (DimensionOverflowError, ExcessPayloadError,
                               MalformedHeaderError, NonFinitePayloadError,
                               TruncatedPayloadError)

from .arrays import matrix, tensor3

#===============================================================================

MATRIX_MAGIC = b'MFEA-MAT 1'
TENSOR_MAGIC = b'MFEA-TEN 1'

MAX_ELEMENTS = 2**36        #: Largest array a header may advertise

DISK_DTYPE = np.dtype('<f8')

#===============================================================================

def __write(path, magic, array):
    with open(path, 'wb') as fp:
        fp.write(magic + b'\n')
        fp.write(' '.join(str(n) for n in array.shape).encode('ascii') + b'\n')
        fp.write(np.ascontiguousarray(array, dtype=DISK_DTYPE).tobytes())

def __read(path, magic, ndim):
    with open(path, 'rb') as fp:
        data = fp.read()
    magic_end = data.find(b'\n')
    if magic_end < 0 or data[:magic_end].rstrip(b'\r') != magic:
        raise MalformedHeaderError('{}: expected "{}" header'.format(path, magic.decode('ascii')))
    dims_end = data.find(b'\n', magic_end + 1)
    if dims_end < 0:
        raise MalformedHeaderError('{}: missing dimensions line'.format(path))
    try:
        fields = data[magic_end+1:dims_end].decode('ascii').split()
        shape = tuple(int(field) for field in fields)
    except (UnicodeDecodeError, ValueError):
        raise MalformedHeaderError('{}: invalid dimensions line'.format(path))
    if len(shape) != ndim or any(n < 0 for n in shape):
        raise MalformedHeaderError('{}: expected {} non-negative dimensions'.format(path, ndim))
    count = 1
    for n in shape:
        count *= n
    if count > MAX_ELEMENTS:
        raise DimensionOverflowError('{}: {} elements exceeds limit of {}'
                                     .format(path, count, MAX_ELEMENTS))
    payload = data[dims_end+1:]
    expected = count*DISK_DTYPE.itemsize
    if len(payload) < expected:
        raise TruncatedPayloadError('{}: {} bytes of payload, {} expected'
                                    .format(path, len(payload), expected))
    if len(payload) > expected:
        raise ExcessPayloadError('{}: {} bytes of payload, {} expected'
                                 .format(path, len(payload), expected))
    values = np.frombuffer(payload, dtype=DISK_DTYPE).astype(np.float64).reshape(shape)
    if not np.all(np.isfinite(values)):
        raise NonFinitePayloadError('{}: payload contains non-finite values'.format(path))
    return values

#===============================================================================

def write_matrix(path, m):
#=========================
    __write(path, MATRIX_MAGIC, matrix(m))

def read_matrix(path):
#=====================
    """
    :raises ParseError: a :class:`MalformedHeaderError`, :class:`TruncatedPayloadError`,
                        :class:`ExcessPayloadError`, :class:`DimensionOverflowError`
                        or :class:`NonFinitePayloadError`
    """
    return matrix(__read(path, MATRIX_MAGIC, 2))

def write_tensor(path, t):
#=========================
    __write(path, TENSOR_MAGIC, tensor3(t))

def read_tensor(path):
#=====================
    return tensor3(__read(path, TENSOR_MAGIC, 3))

#===============================================================================

def write_vector(path, v):
#=========================
    """
    Vectors are stored as single-column matrices.
    """
    v = np.asarray(v, dtype=np.float64)
    write_matrix(path, v.reshape(-1, 1))

def read_vector(path):
#=====================
    m = read_matrix(path)
    if m.shape[1] != 1:
        raise MalformedHeaderError('{}: expected a single column'.format(path))
    return m[:, 0]

#===============================================================================

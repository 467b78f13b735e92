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
Portable graymaps and pixmaps.

Reads plain (``P2``, ``P3``) and binary (``P5``, ``P6``) files with 8 or 16
bit samples. Colour is converted to gray as ``0.299 R + 0.587 G + 0.114 B``
and intensities are scaled by ``maxval`` into ``[0, 1]``.
"""

#===============================================================================

import numpy as np

#===============================================================================

from midfea.exceptions import ImageDecodeError
from midfea.lowlevel import GrayImage

#===============================================================================

LUMINANCE = np.array([0.299, 0.587, 0.114])

CHANNELS = {
    b'P2': 1,
    b'P3': 3,
    b'P5': 1,
    b'P6': 3,
}

WHITESPACE = b' \t\n\r\v\f'

#===============================================================================

def _header(data, path):
    # Magic, width, height and maxval, with '#' comments allowed between
    # tokens; returns the tokens and where the raster starts
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos:pos+1] in WHITESPACE:
            pos += 1
        if pos < len(data) and data[pos:pos+1] == b'#':
            end = data.find(b'\n', pos)
            pos = len(data) if end < 0 else end + 1
            continue
        start = pos
        while pos < len(data) and data[pos:pos+1] not in WHITESPACE and data[pos:pos+1] != b'#':
            pos += 1
        if start == pos:
            raise ImageDecodeError(path, 'incomplete header')
        tokens.append(data[start:pos])
    if pos >= len(data) or data[pos:pos+1] not in WHITESPACE:
        raise ImageDecodeError(path, 'no whitespace after header')
    return tokens, pos + 1

def decode_netpbm(data, path='<bytes>'):
#=======================================
    """
    :param data: the bytes of a ``P2``, ``P3``, ``P5`` or ``P6`` file
    :returns: a ``(pixels, maxval)`` pair, pixels being an integer array of
              shape ``(height, width)`` or ``(height, width, 3)``
    :raises ImageDecodeError: if the data is not a valid image
    """
    magic = data[:2]
    if magic not in CHANNELS:
        raise ImageDecodeError(path, 'not a portable graymap or pixmap')
    tokens, raster = _header(data, path)
    try:
        width, height, maxval = (int(token) for token in tokens[1:])
    except ValueError:
        raise ImageDecodeError(path, 'invalid header values')
    if width < 1 or height < 1 or not (0 < maxval < 65536):
        raise ImageDecodeError(path, 'invalid size {}x{} or maxval {}'.format(width, height, maxval))
    channels = CHANNELS[magic]
    count = width*height*channels
    if magic in [b'P2', b'P3']:
        try:
            samples = np.array(data[raster:].split(), dtype=np.int64)
        except ValueError:
            raise ImageDecodeError(path, 'invalid sample values')
        if len(samples) < count:
            raise ImageDecodeError(path, 'expected {} samples, found {}'.format(count, len(samples)))
        samples = samples[:count]
    else:
        dtype = np.dtype('u1') if maxval < 256 else np.dtype('>u2')
        expected = count*dtype.itemsize
        if len(data) - raster < expected:
            raise ImageDecodeError(path, 'expected {} bytes of pixels, found {}'
                                         .format(expected, len(data) - raster))
        samples = np.frombuffer(data, dtype=dtype, count=count, offset=raster).astype(np.int64)
    if samples.min() < 0 or samples.max() > maxval:
        raise ImageDecodeError(path, 'sample values exceed maxval {}'.format(maxval))
    shape = (height, width) if channels == 1 else (height, width, 3)
    return samples.reshape(shape), maxval

def read_image(path):
#====================
    """
    Read a portable graymap or pixmap as a :class:`~midfea.lowlevel.image.GrayImage`.

    :raises ImageDecodeError: if the file is unreadable or malformed
    """
    try:
        with open(path, 'rb') as fp:
            data = fp.read()
    except OSError as err:
        raise ImageDecodeError(path, err.strerror or str(err))
    samples, maxval = decode_netpbm(data, path)
    intensities = samples/maxval
    if intensities.ndim == 3:
        intensities = np.clip(intensities @ LUMINANCE, 0.0, 1.0)
    return GrayImage(intensities, source=str(path))

#===============================================================================

def encode_pgm(pixels, maxval=255):
#==================================
    """
    Binary graymap bytes for intensities in ``[0, 1]``, rounded to
    ``maxval`` levels.
    """
    pixels = np.asarray(pixels, dtype=np.float64)
    levels = np.rint(np.clip(pixels, 0.0, 1.0)*maxval).astype(np.int64)
    dtype = np.dtype('u1') if maxval < 256 else np.dtype('>u2')
    header = 'P5\n{} {}\n{}\n'.format(pixels.shape[1], pixels.shape[0], maxval).encode('ascii')
    return header + levels.astype(dtype).tobytes()

def write_pgm(path, pixels, maxval=255):
#=======================================
    with open(path, 'wb') as fp:
        fp.write(encode_pgm(pixels, maxval))

#===============================================================================

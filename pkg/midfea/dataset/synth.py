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
Synthetic oriented-texture datasets.

Class ``c`` of ``C`` is a sinusoidal grating overlaid with bars, both at an
angle of ``c*180/C`` degrees. Every image has a random phase and bar
offset, a random brightness gain and additive Gaussian noise.
"""

#===============================================================================

import math
import pathlib

#===============================================================================

import cv2
import numpy as np

#===============================================================================

from midfea.exceptions import InvalidArgumentError
from midfea.utils import ProgressBar, ensure_directory, log

from .manifest import MANIFEST_NAME, TEST, TRAIN, DatasetManifest, ManifestEntry
from .netpbm import write_pgm

#===============================================================================

GRATING_PERIOD = 8.0        #: Pixels per grating cycle
BAR_SPACING = 16.0          #: Pixels between bar centres
BAR_THICKNESS = 2           #: Bar width in pixels

NOISE_SIGMA = 0.05
GAIN_RANGE = (0.5, 2.0)

#===============================================================================

def class_label(c):
#==================
    return 'class{:02d}'.format(c)

def oriented_texture(size, angle, rng):
#======================================
    """
    A ``size x size`` texture at ``angle`` degrees, with intensities in
    ``[0, 1]``.
    """
    theta = math.radians(angle)
    normal = (math.cos(theta), math.sin(theta))
    y, x = np.mgrid[0:size, 0:size].astype(np.float64)
    across = x*normal[0] + y*normal[1]
    phase = rng.uniform(0.0, 2.0*math.pi)
    grating = 0.5 + 0.5*np.cos(2.0*math.pi*across/GRATING_PERIOD + phase)

    bars = np.zeros((size, size), dtype=np.float32)
    along = (-normal[1], normal[0])
    centre = (size - 1)/2.0
    offset = rng.uniform(0.0, BAR_SPACING)
    reach = size*2.0
    position = offset - size
    while position <= size:
        px = centre + position*normal[0]
        py = centre + position*normal[1]
        start = (int(round(px - reach*along[0])), int(round(py - reach*along[1])))
        end = (int(round(px + reach*along[0])), int(round(py + reach*along[1])))
        cv2.line(bars, start, end, 1.0, thickness=BAR_THICKNESS, lineType=cv2.LINE_8)
        position += BAR_SPACING

    base = 0.35*grating + 0.15*bars.astype(np.float64)
    gain = rng.uniform(*GAIN_RANGE)
    noisy = base*gain + rng.normal(NOISE_SIGMA, (size, size))
    return np.clip(noisy, 0.0, 1.0)

def synthesise(out_dir, classes=4, per_class=80, size=64, rng=None):
#===================================================================
    """
    Write a synthetic dataset of ``classes*per_class`` binary graymaps with a
    manifest giving half of each class to training.

    :rtype: :class:`~midfea.dataset.manifest.DatasetManifest`
    """
    if classes < 2:
        raise InvalidArgumentError('A synthetic dataset needs at least two classes')
    if per_class < 2:
        raise InvalidArgumentError('Each class needs at least two images')
    if rng is None:
        raise InvalidArgumentError('A synthetic dataset needs a random stream')
    out_dir = ensure_directory(out_dir)
    entries = []
    training = per_class//2
    with ProgressBar(total=classes*per_class, unit='img', desc='Synthesising') as progress:
        for c in range(classes):
            label = class_label(c)
            class_dir = ensure_directory(out_dir/label)
            class_rng = rng.derive(label)
            angle = c*180.0/classes
            for n in range(per_class):
                path = class_dir/'{}_{:04d}.pgm'.format(label, n)
                write_pgm(path, oriented_texture(size, angle, class_rng))
                entries.append(ManifestEntry(path, label, TRAIN if n < training else TEST))
                progress.update(1)
    manifest = DatasetManifest(out_dir, entries)
    manifest.write(pathlib.Path(out_dir)/MANIFEST_NAME)
    log.info('Wrote {} images of {} classes to {}'.format(len(entries), classes, out_dir))
    return manifest

#===============================================================================

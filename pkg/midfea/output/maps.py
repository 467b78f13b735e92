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

import pathlib

#===============================================================================

import numpy as np

#===============================================================================

from midfea.exceptions import InvalidArgumentError
from midfea.dataset import write_pgm
from midfea.lowlevel import assemble_descriptors, max_pool_3d, soft_convolve_stages
from midfea.utils import ensure_directory, log

#===============================================================================

EXPORT_STAGES = ['sconv_raw', 'sconv_norm', 'sconv_thresh', 'sconv_final',
                 'pooled', 'descriptor_mean']

#===============================================================================

def stage_maps(img, bank, stage):
#================================
    """
    The maps of a pipeline stage as a ``(height, width, count)`` array.

    ``descriptor_mean`` averages each map's four neighbours in the local
    descriptors.
    """
    if stage not in EXPORT_STAGES:
        raise InvalidArgumentError('Unknown stage "{}", expected one of {}'
                                   .format(stage, ', '.join(EXPORT_STAGES)))
    stages = soft_convolve_stages(img, bank)
    if stage == 'sconv_raw':
        return stages.raw
    elif stage == 'sconv_norm':
        return stages.normalised
    elif stage == 'sconv_thresh':
        return stages.thresholded
    elif stage == 'sconv_final':
        return stages.final
    pooled = max_pool_3d(stages.final)
    if stage == 'pooled':
        return pooled
    field = assemble_descriptors(pooled)
    return field.values.reshape(field.height, field.width, -1, 4).mean(axis=3)

def rescale(values):
#===================
    """
    Map values linearly onto ``[0, 1]``; a constant map keeps its value
    clipped to that range.
    """
    low = values.min()
    high = values.max()
    if high > low:
        return (values - low)/(high - low)
    return np.clip(values, 0.0, 1.0)

def export_maps(img, bank, out_dir, stage):
#==========================================
    """
    Write each map of a stage as a graymap, scaled to the full grey range,
    followed by the average of the scaled maps.

    :returns: the paths written, the average last
    """
    maps = stage_maps(img, bank, stage)
    out_dir = ensure_directory(out_dir)
    scaled = np.stack([rescale(maps[:, :, n]) for n in range(maps.shape[2])], axis=2)
    paths = []
    for n in range(scaled.shape[2]):
        path = pathlib.Path(out_dir)/'{}_{:03d}.pgm'.format(stage, n)
        write_pgm(path, scaled[:, :, n])
        paths.append(path)
    path = pathlib.Path(out_dir)/'{}_average.pgm'.format(stage)
    write_pgm(path, scaled.mean(axis=2))
    paths.append(path)
    log.info('Wrote {} {} maps to {}'.format(len(paths), stage, out_dir))
    return paths

#===============================================================================

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
Partitions of a code map for spatial pooling.

Three kinds are supported, each with a text form:

* ``pyramid:L`` -- levels ``l = 0 .. L-1``, level ``l`` splitting the map
  into ``2^l x 2^l`` cells; coarse levels first.
* ``grid:RxC`` -- a single level of ``R`` rows by ``C`` columns of cells.
* ``overlap:CELL,STRIDE`` -- square cells of ``CELL`` image pixels placed
  every ``STRIDE`` pixels, so neighbouring cells overlap when
  ``STRIDE < CELL``.

Cells within a level are listed row by row.
"""

#===============================================================================

import re

#===============================================================================

import numpy as np

#===============================================================================

from midfea.exceptions import InvalidArgumentError

#===============================================================================

PYRAMID = 'pyramid'
GRID = 'grid'
OVERLAP = 'overlap'

PARTITION_PRESETS = {
    'objects': 'pyramid:3',
    'faces':   'grid:3x3',
    'ages':    'overlap:8,8',
}

#===============================================================================

def _even_edges(extent, parts):
    return [(extent*n)//parts for n in range(parts + 1)]

#===============================================================================

class PartitionSpec(object):
    def __init__(self, kind, *params):
        params = tuple(int(p) for p in params)
        if kind == PYRAMID:
            if len(params) != 1 or params[0] < 1:
                raise InvalidArgumentError('A pyramid needs at least one level')
        elif kind == GRID:
            if len(params) != 2 or min(params) < 1:
                raise InvalidArgumentError('A grid needs at least one row and column')
        elif kind == OVERLAP:
            if len(params) != 2 or min(params) < 1:
                raise InvalidArgumentError('Overlapping cells need a positive size and stride')
            if params[1] > params[0]:
                raise InvalidArgumentError('Overlap stride {} is larger than cell size {}'
                                           .format(params[1], params[0]))
        else:
            raise InvalidArgumentError('Unknown partition kind: {}'.format(kind))
        self.__kind = kind
        self.__params = params

    def __eq__(self, other):
        return (isinstance(other, PartitionSpec)
            and self.__kind == other.kind and self.__params == other.params)

    def __hash__(self):
        return hash((self.__kind, self.__params))

    def __repr__(self):
        return 'PartitionSpec({})'.format(str(self))

    def __str__(self):
        if self.__kind == PYRAMID:
            return '{}:{}'.format(PYRAMID, self.__params[0])
        elif self.__kind == GRID:
            return '{}:{}x{}'.format(GRID, *self.__params)
        else:
            return '{}:{},{}'.format(OVERLAP, *self.__params)

    @property
    def kind(self) -> str:
        return self.__kind

    @property
    def params(self) -> tuple:
        return self.__params

    @classmethod
    def parse(cls, text):
    #====================
        """
        Parse the text form of a partition, or the name of a preset.
        """
        text = PARTITION_PRESETS.get(text.strip(), text.strip())
        m = re.fullmatch(r'(pyramid):(\d+)|(grid):(\d+)x(\d+)|(overlap):(\d+),(\d+)', text)
        if m is None:
            raise InvalidArgumentError('Invalid partition "{}", expected pyramid:L, grid:RxC or overlap:CELL,STRIDE'
                                       .format(text))
        groups = [g for g in m.groups() if g is not None]
        return cls(groups[0], *groups[1:])

    def regions(self, height, width, pixel_step=2):
    #==============================================
        """
        The cells of a ``height x width`` code map whose codes are
        ``pixel_step`` image pixels apart.

        :returns: a list of ``(row_start, row_end, col_start, col_end)`` code
                  index ranges; a range may be empty
        """
        regions = []
        if self.__kind in [PYRAMID, GRID]:
            if self.__kind == PYRAMID:
                levels = [(2**l, 2**l) for l in range(self.__params[0])]
            else:
                levels = [self.__params]
            for (rows, cols) in levels:
                row_edges = _even_edges(height, rows)
                col_edges = _even_edges(width, cols)
                for r in range(rows):
                    for c in range(cols):
                        regions.append((row_edges[r], row_edges[r+1],
                                        col_edges[c], col_edges[c+1]))
        else:
            cell, stride = self.__params
            row_ranges = _overlap_ranges(height, pixel_step, cell, stride)
            col_ranges = _overlap_ranges(width, pixel_step, cell, stride)
            for (r0, r1) in row_ranges:
                for (c0, c1) in col_ranges:
                    regions.append((r0, r1, c0, c1))
        return regions

#===============================================================================

def _overlap_ranges(count, pixel_step, cell, stride):
    # Code n sits at pixel n*pixel_step; a cell starting at pixel p holds the
    # codes with p <= n*pixel_step < p + cell
    extent = count*pixel_step
    starts = list(range(0, max(extent - cell, 0) + 1, stride))
    ranges = []
    for p in starts:
        first = -(-p//pixel_step)
        last = -(-(p + cell)//pixel_step)
        ranges.append((min(first, count), min(last, count)))
    return ranges

#===============================================================================

def spatial_pool(codes, cb_size, part):
#======================================
    """
    Max-pool one-hot codes over the cells of a partition.

    :param codes: a :class:`~midfea.midlevel.codebook.CodeMap`
    :param cb_size: number of codewords
    :param part: a :class:`PartitionSpec`
    :returns: for each cell in turn, ``cb_size`` entries that are 1 where the
              codeword occurs in the cell and 0 elsewhere. Empty cells give
              all zeros.
    """
    grid = codes.codes
    if grid.size and (grid.min() < 0 or grid.max() >= cb_size):
        raise InvalidArgumentError('Codes are outside a codebook of size {}'.format(cb_size))
    regions = part.regions(codes.height, codes.width, codes.pixel_step)
    pooled = np.zeros((len(regions), cb_size))
    for n, (r0, r1, c0, c1) in enumerate(regions):
        present = np.bincount(grid[r0:r1, c0:c1].ravel(), minlength=cb_size)
        pooled[n] = (present > 0)
    return pooled.ravel()

def pooled_length(part, cb_size, height, width, pixel_step=2):
#=============================================================
    return cb_size*len(part.regions(height, width, pixel_step))

#===============================================================================

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

__version__ = '1.0.0b1'

#===============================================================================

# Guard used whenever a vector is scaled to unit Euclidean length

EPS_NORM = 1e-12    #: Vectors with a smaller norm normalise to all zeros

#===============================================================================

# Defaults for feature extraction

FILTER_COUNT  =   9   #: Default number of low-level filters
FILTER_SIZE   =   7   #: Default side of a low-level filter, in pixels
CODEBOOK_SIZE = 500   #: Default number of VQ codewords
PROJECTED_DIM = 300   #: Default dimension of a mid-level feature

KMEANS_ITERATIONS = 100   #: Default maximum number of Lloyd iterations

#===============================================================================

from .maker import FeatureMaker

#===============================================================================

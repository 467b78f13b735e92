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

from .arrays import l21_norm, matrix, nearest_columns, normalise_columns, tensor3, vector
from .fileformat import read_matrix, read_tensor, read_vector
from .fileformat import write_matrix, write_tensor, write_vector
from .kmeans import kmeans, kmeans_objective
from .rng import SeededRng

#===============================================================================

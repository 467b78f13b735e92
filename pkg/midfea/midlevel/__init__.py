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

from .codebook import CodeMap, Codebook, learn_codebook, vq_encode
from .extractor import FEED_FORWARD_STAGES, PipelineModel, extract_features, extract_midfeature
from .partitions import PARTITION_PRESETS, PartitionSpec, pooled_length, spatial_pool
from .projection import MidFeature, project_normalize, projection_matrix

#===============================================================================

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

from .filters import FilterBank, learn_filters
from .image import GrayImage, image_pixels
from .pooling import DescriptorField, assemble_descriptors, max_pool_3d
from .sconv import SoftConvolution, soft_convolve, soft_convolve_stages

#===============================================================================

def describe(img, bank):
#=======================
    """
    Local descriptors of an image: soft convolution, 3D max-pooling and
    descriptor assembly.
    """
    return assemble_descriptors(max_pool_3d(soft_convolve(img, bank)))

#===============================================================================

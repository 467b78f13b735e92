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

from .initialise import allocate_neurons, init_classwise, init_random, similarity_codes
from .model import NSHyper, NSModel, encode, infer_batch
from .objective import class_block_objective, grad_D, grad_Hc, grad_Wb
from .objective import objective, objective_terms, smoothed_l21
from .selectivity import SelectivityReport, cross_class_coherence, selectivity_report
from .trainer import INIT_MODES, TrainingResult, TrainingTrace, analytic_decoder, train

#===============================================================================

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
Per-stage timing of the feed-forward pipeline.

Each repeat runs an image through every stage; a stage's time is its median
over the repeats and the total is the sum of the stage medians.
"""

#===============================================================================

from contextlib import contextmanager
import csv
from dataclasses import dataclass, field
import time

#===============================================================================

import cv2
import numpy as np

#===============================================================================

from midfea.exceptions import InvalidArgumentError
from midfea.midlevel import FEED_FORWARD_STAGES, extract_midfeature
from midfea.nslayer import encode
from midfea.utils import ProgressBar

#===============================================================================

INFERENCE = 'inference'
TOTAL = 'total'

BENCH_STAGES = FEED_FORWARD_STAGES + [INFERENCE]

#===============================================================================

@dataclass
class StageTimings:
    samples: dict = field(default_factory=dict)     #: stage name to milliseconds per repeat

    @contextmanager
    def stage(self, name):
    #=====================
        start = time.perf_counter()
        try:
            yield
        finally:
            self.record(name, 1000.0*(time.perf_counter() - start))

    def record(self, name, milliseconds):
    #====================================
        self.samples.setdefault(name, []).append(milliseconds)

    def medians(self):
    #=================
        """
        Median milliseconds of each stage, in pipeline order.
        """
        names = [name for name in BENCH_STAGES if name in self.samples]
        names.extend(sorted(name for name in self.samples if name not in BENCH_STAGES))
        return {name: float(np.median(self.samples[name])) for name in names}

    def total(self):
    #===============
        return float(sum(self.medians().values()))

    def table(self):
    #===============
        rows = list(self.medians().items()) + [(TOTAL, self.total())]
        width = max(len(name) for name, _ in rows)
        lines = ['{:<{}}  {:>10}'.format('stage', width, 'ms')]
        for name, ms in rows:
            if name == TOTAL:
                lines.append('-'*(width + 12))
            lines.append('{:<{}}  {:>10.3f}'.format(name, width, ms))
        return '\n'.join(lines)

    def write_csv(self, path):
    #=========================
        with open(path, 'w', newline='') as fp:
            writer = csv.writer(fp)
            writer.writerow(['stage', 'milliseconds'])
            for name, ms in self.medians().items():
                writer.writerow([name, '{:.6f}'.format(ms)])
            writer.writerow([TOTAL, '{:.6f}'.format(self.total())])

#===============================================================================

def run_benchmark(img, pipeline, ns_model=None, classifier=None, repeats=5, threads=1):
#=====================================================================================
    """
    Time the stages of extracting, and optionally classifying, one image.

    The ``inference`` stage covers the Neuron-Selectivity encoder and the
    classifier's scores, whichever are given.

    :rtype: StageTimings
    """
    if repeats < 1:
        raise InvalidArgumentError('Benchmarking needs at least one repeat')
    saved_threads = cv2.getNumThreads()
    cv2.setNumThreads(threads)
    timings = StageTimings()
    try:
        with ProgressBar(total=repeats, unit='run', desc='Benchmarking') as progress:
            for _ in range(repeats):
                feature = extract_midfeature(img, pipeline, timer=timings)
                with timings.stage(INFERENCE):
                    values = feature.values
                    if ns_model is not None:
                        values = encode(values, ns_model)
                    if classifier is not None:
                        classifier.scores(values[:, np.newaxis])
                progress.update(1)
    finally:
        cv2.setNumThreads(saved_threads)
    return timings

#===============================================================================

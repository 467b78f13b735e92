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
Model directories.

Every artifact of a run lives in one directory::

    filters.mat, filters.txt        low-level filters and "<side> <count>"
    codebook.mat                    VQ codewords, one per column
    projection.mat                  random projection
    pipeline.txt                    partition, VQ stride and pooled size
    features-<split>.mat            mid-level features, one per column
    labels-<split>.mat              their class indices
    ns/D.mat, W.mat, b.mat          Neuron-Selectivity layer
    ns/hyper.txt                    its training parameters
    ns/trace.csv                    objective after each epoch
    clf-<variant>/weights.mat       linear classifier
    clf-<variant>/biases.mat
    clf-<variant>/meta.txt
"""

#===============================================================================

import csv
import pathlib

#===============================================================================

import numpy as np

#===============================================================================

from midfea.classify import LinearClassifier
from midfea.exceptions import MalformedHeaderError
from midfea.lowlevel import FilterBank
from midfea.midlevel import Codebook, PartitionSpec, PipelineModel
from midfea.nslayer import NSHyper, NSModel
from midfea.numerics import read_matrix, read_vector, write_matrix, write_vector
from midfea.utils import ensure_directory, read_key_values, required_file, write_key_values

#===============================================================================

FILTERS_MATRIX = 'filters.mat'
FILTERS_SIDECAR = 'filters.txt'
CODEBOOK_MATRIX = 'codebook.mat'
PROJECTION_MATRIX = 'projection.mat'
PIPELINE_SETTINGS = 'pipeline.txt'

NS_DIRECTORY = 'ns'
NS_HYPER = 'hyper.txt'
NS_TRACE = 'trace.csv'

CLASSIFIER_WEIGHTS = 'weights.mat'
CLASSIFIER_BIASES = 'biases.mat'
CLASSIFIER_META = 'meta.txt'

#===============================================================================

# Names of NS parameters in ``hyper.txt``, where they differ from field names

HYPER_NAMES = {'lam': 'lambda'}
HYPER_FIELDS = {name: field for field, name in HYPER_NAMES.items()}

#===============================================================================

class ModelStore(object):
    """
    A directory of model artifacts.

    :param directory: where artifacts are kept
    :param create: create the directory if it doesn't exist
    """
    def __init__(self, directory, create=False):
        self.__directory = pathlib.Path(directory)
        if create:
            ensure_directory(self.__directory)

    def __str__(self):
        return 'ModelStore {}'.format(self.__directory)

    @property
    def directory(self):
        return self.__directory

    def path(self, *parts):
    #======================
        return self.__directory.joinpath(*parts)

    def __required(self, what, *parts):
        return required_file(self.path(*parts), what)

    # Filters
    # -------

    def save_filter_bank(self, bank):
    #================================
        write_matrix(self.path(FILTERS_MATRIX), bank.filters)
        self.path(FILTERS_SIDECAR).write_text('{} {}\n'.format(bank.side, bank.count))

    def load_filter_bank(self):
    #==========================
        sidecar = self.__required('filter bank', FILTERS_SIDECAR)
        filters = read_matrix(self.__required('filter bank', FILTERS_MATRIX))
        try:
            side, count = (int(n) for n in sidecar.read_text().split())
        except ValueError:
            raise MalformedHeaderError('{}: expected "<side> <count>"'.format(sidecar))
        if filters.shape != (side*side, count):
            raise MalformedHeaderError('{}: {} filters of side {} do not match a {}x{} matrix'
                                       .format(sidecar, count, side, *filters.shape))
        return FilterBank(filters, side)

    # Feed-forward pipeline
    # ---------------------

    def save_pipeline(self, model):
    #==============================
        self.save_filter_bank(model.bank)
        write_matrix(self.path(CODEBOOK_MATRIX), model.codebook.words)
        write_matrix(self.path(PROJECTION_MATRIX), model.projection)
        write_key_values(self.path(PIPELINE_SETTINGS), {
            'pool.partition': str(model.partition),
            'pooled.dim': model.pooled_dim,
            'vq.stride': model.vq_stride,
        })

    def load_pipeline(self):
    #=======================
        """
        :rtype: :class:`~midfea.midlevel.extractor.PipelineModel`
        :raises MissingArtifactError: naming the first missing file
        """
        bank = self.load_filter_bank()
        codebook = Codebook(read_matrix(self.__required('codebook', CODEBOOK_MATRIX)))
        projection = read_matrix(self.__required('projection', PROJECTION_MATRIX))
        settings = read_key_values(self.__required('pipeline settings', PIPELINE_SETTINGS))
        try:
            partition = PartitionSpec.parse(settings['pool.partition'])
            stride = int(settings['vq.stride'])
        except (KeyError, ValueError) as err:
            raise MalformedHeaderError('{}: {}'.format(self.path(PIPELINE_SETTINGS), err))
        return PipelineModel(bank, codebook, partition, projection, vq_stride=stride)

    # Features
    # --------

    def save_features(self, split, features, labels):
    #================================================
        write_matrix(self.path('features-{}.mat'.format(split)), features)
        write_vector(self.path('labels-{}.mat'.format(split)), np.asarray(labels, dtype=np.float64))

    def load_features(self, split):
    #==============================
        """
        :returns: ``(features, labels)``, one feature per column
        """
        features = read_matrix(self.__required('{} features'.format(split), 'features-{}.mat'.format(split)))
        labels = read_vector(self.__required('{} labels'.format(split), 'labels-{}.mat'.format(split)))
        if len(labels) != features.shape[1]:
            raise MalformedHeaderError('{} {} features but {} labels'
                                       .format(split, features.shape[1], len(labels)))
        return features, labels.astype(np.int64)

    # Neuron-Selectivity layer
    # ------------------------

    def save_ns_model(self, model):
    #==============================
        directory = ensure_directory(self.path(NS_DIRECTORY))
        write_matrix(directory/'D.mat', model.D)
        write_matrix(directory/'W.mat', model.W)
        write_vector(directory/'b.mat', model.b)
        write_key_values(directory/NS_HYPER, {HYPER_NAMES.get(key, key): value
                                                for key, value in model.hyper.as_dict().items()})

    def load_ns_model(self):
    #=======================
        D = read_matrix(self.__required('NS decoder', NS_DIRECTORY, 'D.mat'))
        W = read_matrix(self.__required('NS encoder', NS_DIRECTORY, 'W.mat'))
        b = read_vector(self.__required('NS bias', NS_DIRECTORY, 'b.mat'))
        values = read_key_values(self.__required('NS parameters', NS_DIRECTORY, NS_HYPER))
        hyper = NSHyper.from_dict({HYPER_FIELDS.get(key, key): value for key, value in values.items()})
        return NSModel(D, W, b, hyper)

    def write_trace(self, trace):
    #============================
        """
        Write the objective after each epoch as ``epoch,objective`` CSV.
        """
        directory = ensure_directory(self.path(NS_DIRECTORY))
        with open(directory/NS_TRACE, 'w', newline='') as fp:
            writer = csv.writer(fp)
            writer.writerow(['epoch', 'objective'])
            for epoch, value in enumerate(trace.epochs):
                writer.writerow([epoch, repr(value)])

    # Classifiers
    # -----------

    def save_classifier(self, variant, clf, epochs=None):
    #====================================================
        directory = ensure_directory(self.path('clf-{}'.format(variant)))
        write_matrix(directory/CLASSIFIER_WEIGHTS, clf.weights)
        write_vector(directory/CLASSIFIER_BIASES, clf.biases)
        meta = {
            'classes': ','.join(str(c) for c in clf.classes),
            'reg': repr(clf.reg),
        }
        if epochs is not None:
            meta['epochs'] = epochs
        write_key_values(directory/CLASSIFIER_META, meta)

    def load_classifier(self, variant):
    #==================================
        what = '{} classifier'.format(variant)
        directory = 'clf-{}'.format(variant)
        weights = read_matrix(self.__required(what, directory, CLASSIFIER_WEIGHTS))
        biases = read_vector(self.__required(what, directory, CLASSIFIER_BIASES))
        meta = read_key_values(self.__required(what, directory, CLASSIFIER_META))
        try:
            classes = [int(c) for c in meta['classes'].split(',')]
            reg = float(meta['reg'])
        except (KeyError, ValueError) as err:
            raise MalformedHeaderError('{}: {}'.format(self.path(directory, CLASSIFIER_META), err))
        return LinearClassifier(weights, biases, classes, reg)

#===============================================================================

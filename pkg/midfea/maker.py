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

from concurrent.futures import ThreadPoolExecutor
import csv
import pathlib

#===============================================================================

import numpy as np

#===============================================================================

from midfea import __version__
from midfea.utils import log

#===============================================================================

from .classify import accuracy, mae, predict, train_linear
from .config import RunConfig
from .dataset import SPLITS, TEST, TRAIN, ingest, read_image, synthesise
from .exceptions import DataError, MissingArtifactError, UsageError
from .lowlevel import describe, learn_filters
from .midlevel import (PipelineModel, extract_features, learn_codebook,
                       pooled_length, projection_matrix, vq_encode)
from .nslayer import infer_batch, selectivity_report, train
from .numerics import SeededRng, normalise_columns
from .output import ModelStore, export_maps, run_benchmark
from .settings import settings
from .utils import ProgressBar

#===============================================================================

CLASSES_FILE = 'classes.txt'

MIDFEA = 'midfea'
MIDFEA_NS = 'midfea-ns'
RAW = 'raw'

SWEEP_PARAMETERS = {
    'alpha':  'ns.alpha',
    'beta':   'ns.beta',
    'gamma':  'ns.gamma',
    'lambda': 'ns.lambda',
    'd':      'ns.d',
}

#===============================================================================

class FeatureMaker(object):
    """
    Runs the steps of learning, extracting and classifying mid-level features.

    :param options: a dictionary of options; ``config`` names a configuration
                    file, ``seed`` and ``threads`` override it and ``output``
                    is the model directory
    """
    def __init__(self, options):
        config_file = options.get('config')
        self.__config = RunConfig.load(config_file) if config_file else RunConfig()
        if options.get('seed') is not None:
            self.__config.set('seed', options['seed'])
        self.__threads = options.get('threads') or 1
        if self.__threads < 1:
            raise UsageError('Thread count must be at least 1')
        if options.get('output') is None:
            options['output'] = './midfea-model'

        # Save options into global ``settings`` dict
        settings.update(options)

        self.__store = ModelStore(options['output'], create=True)
        self.__rng = SeededRng(self.__config.seed)
        log.debug('MidFea {}, seed {}, model directory {}'
                  .format(__version__, self.__config.seed, self.__store.directory))

    @property
    def config(self):
        return self.__config

    @property
    def store(self):
        return self.__store

    @property
    def threads(self):
        return self.__threads

    def __map(self, function, items, desc):
        results = []
        with ProgressBar(total=len(items), unit='img', desc=desc) as progress:
            if self.__threads > 1:
                with ThreadPoolExecutor(max_workers=self.__threads) as executor:
                    for result in executor.map(function, items):
                        results.append(result)
                        progress.update(1)
            else:
                for item in items:
                    results.append(function(item))
                    progress.update(1)
        return results

    # Datasets
    # --------

    def synth(self, out_dir, classes=4, per_class=80, size=64):
    #==========================================================
        return synthesise(out_dir, classes, per_class, size, self.__rng.derive('synth'))

    def ingest_check(self, source):
    #==============================
        """
        :returns: the dataset's :class:`~midfea.dataset.manifest.DatasetManifest`
        :raises DataError: if the dataset is unusable
        """
        manifest = ingest(source)
        manifest.require_splits()
        for split in SPLITS:
            manifest.load_images(split)
        return manifest

    # Learning
    # --------

    def learn(self, source):
    #=======================
        """
        Learn filters, codebook and projection from a dataset's training images.
        """
        config = self.__config
        manifest = ingest(source)
        manifest.require_splits()
        images = manifest.load_images(TRAIN)
        bank = learn_filters(images, side=config['filters.size'], count=config['filters.count'],
                             patches_per_image=config['filters.patches'],
                             rng=self.__rng.derive('filters'),
                             max_iter=config['kmeans.iterations'])
        fields = self.__map(lambda img: describe(img, bank), images, 'Describing images')
        codebook = learn_codebook(fields, m=config['codebook.size'],
                                  sample_cap=config['codebook.samples'],
                                  rng=self.__rng.derive('codebook'),
                                  max_iter=config['kmeans.iterations'])
        partition = config.partition
        codes = vq_encode(fields[0], codebook, config['vq.stride'])
        in_dim = pooled_length(partition, codebook.size, codes.height, codes.width, codes.pixel_step)
        out_dim = config['projection.dim']
        if out_dim > in_dim:
            log.warning('Projection dimension {} reduced to the pooled dimension {}'.format(out_dim, in_dim))
            out_dim = in_dim
        projection = projection_matrix(in_dim, out_dim, self.__rng.derive('projection'))
        model = PipelineModel(bank, codebook, partition, projection, vq_stride=config['vq.stride'])
        self.__store.save_pipeline(model)
        log.info('Learnt {}, {} and a {}x{} projection'.format(bank, codebook, out_dim, in_dim))
        return model

    def extract(self, source):
    #=========================
        """
        Extract and save the mid-level features of every image in a dataset.
        """
        model = self.__store.load_pipeline()
        manifest = ingest(source)
        manifest.require_splits()
        for split in SPLITS:
            images = manifest.load_images(split)
            features = extract_features(images, model, threads=self.__threads)
            self.__store.save_features(split, features, manifest.labels(split))
            log.info('Extracted {} {} features'.format(features.shape[1], split))
        self.__store.path(CLASSES_FILE).write_text(''.join('{}\n'.format(label)
                                                      for label in manifest.classes))
        return manifest

    def train_ns(self, hyper=None):
    #==============================
        """
        Train and save the Neuron-Selectivity layer on the training features.

        :rtype: :class:`~midfea.nslayer.trainer.TrainingResult`
        """
        features, labels = self.__store.load_features(TRAIN)
        if hyper is None:
            hyper = self.__config.ns_hyper()
        result = train(features, labels, hyper, self.__config['ns.init'], self.__rng.derive('ns'))
        self.__store.save_ns_model(result.model)
        self.__store.write_trace(result.trace)
        report = selectivity_report(infer_batch(features, result.model), labels)
        log.info('NS layer: within-class similarity {:.4f}, cross-class similarity {:.4f}'
                 .format(report.within_class, report.cross_class))
        return result

    def __ns_model(self, required=False):
        try:
            return self.__store.load_ns_model()
        except MissingArtifactError:
            if required:
                raise
            return None

    def train_clf(self):
    #===================
        """
        Train and save classifiers on the training features, and on their
        Neuron-Selectivity activations when there is an NS layer.

        :returns: a dictionary of variant name to classifier
        """
        config = self.__config
        features, labels = self.__store.load_features(TRAIN)
        classifiers = {MIDFEA: train_linear(features, labels, config['clf.reg'], config['clf.epochs'])}
        ns_model = self.__ns_model()
        if ns_model is not None:
            classifiers[MIDFEA_NS] = train_linear(infer_batch(features, ns_model), labels,
                                                  config['clf.reg'], config['clf.epochs'])
        else:
            log.info('No NS layer, only training the {} classifier'.format(MIDFEA))
        for variant, clf in classifiers.items():
            self.__store.save_classifier(variant, clf, config['clf.epochs'])
        return classifiers

    # Evaluation
    # ----------

    def __label_values(self):
        path = self.__store.path(CLASSES_FILE)
        if not path.is_file():
            return None
        labels = path.read_text().split()
        try:
            return np.array([int(label) for label in labels], dtype=np.int64)
        except ValueError:
            return None

    def __scores(self, pred, truth, values):
        result = {'accuracy': accuracy(pred, truth)}
        if values is not None:
            result['mae'] = mae(values[pred], values[truth])
        return result

    def eval(self, raw_dataset=None):
    #================================
        """
        Classify the test features with each trained classifier.

        :param raw_dataset: if given, also train and test a classifier on the
                            raw pixels of this dataset
        :returns: a dictionary of variant name to a dictionary with
                  ``accuracy`` and, for numeric labels, ``mae``
        """
        features, labels = self.__store.load_features(TEST)
        values = self.__label_values()
        results = {}
        clf = self.__store.load_classifier(MIDFEA)
        results[MIDFEA] = self.__scores(predict(features, clf), labels, values)
        ns_model = self.__ns_model()
        if ns_model is not None:
            clf = self.__store.load_classifier(MIDFEA_NS)
            results[MIDFEA_NS] = self.__scores(predict(infer_batch(features, ns_model), clf),
                                               labels, values)
        if raw_dataset is not None:
            results[RAW] = self.raw_baseline(raw_dataset)
        return results

    def raw_baseline(self, source):
    #==============================
        """
        Accuracy of a linear classifier on unit-length raw pixel vectors.
        """
        config = self.__config
        manifest = ingest(source)
        manifest.require_splits()
        features = {}
        for split in SPLITS:
            images = manifest.load_images(split)
            shapes = {img.shape for img in images}
            if len(shapes) != 1:
                raise DataError('The raw pixel baseline needs images of one size')
            pixels = np.stack([img.pixels.ravel() for img in images], axis=1)
            features[split] = normalise_columns(pixels)
        if features[TRAIN].shape[0] != features[TEST].shape[0]:
            raise DataError('Training and test images differ in size')
        clf = train_linear(features[TRAIN], manifest.labels(TRAIN), config['clf.reg'], config['clf.epochs'])
        values = (np.array([int(label) for label in manifest.classes], dtype=np.int64)
                    if manifest.numeric_labels else None)
        return self.__scores(predict(features[TEST], clf), manifest.labels(TEST), values)

    def sweep(self, parameter, values):
    #==================================
        """
        MidFea-NS test accuracy as one NS parameter varies.

        :param parameter: one of ``alpha``, ``beta``, ``gamma``, ``lambda`` or ``d``
        :param values: the parameter values to try
        :returns: a list of ``(value, accuracy)``; also written to
                  ``sweep-<parameter>.csv``
        """
        if parameter not in SWEEP_PARAMETERS:
            raise UsageError('Cannot sweep "{}", expected one of {}'
                             .format(parameter, ', '.join(SWEEP_PARAMETERS)))
        config = self.__config
        train_features, train_labels = self.__store.load_features(TRAIN)
        test_features, test_labels = self.__store.load_features(TEST)
        results = []
        for value in values:
            swept = RunConfig(config.as_dict())
            swept.set(SWEEP_PARAMETERS[parameter], value)
            result = train(train_features, train_labels, swept.ns_hyper(), swept['ns.init'],
                           self.__rng.derive('ns'))
            clf = train_linear(infer_batch(train_features, result.model), train_labels,
                               config['clf.reg'], config['clf.epochs'])
            score = accuracy(predict(infer_batch(test_features, result.model), clf), test_labels)
            log.info('{} = {}: accuracy {:.4f}'.format(parameter, value, score))
            results.append((swept[SWEEP_PARAMETERS[parameter]], score))
        with open(self.__store.path('sweep-{}.csv'.format(parameter)), 'w', newline='') as fp:
            writer = csv.writer(fp)
            writer.writerow(['parameter', 'value', 'accuracy'])
            for value, score in results:
                writer.writerow([parameter, value, repr(score)])
        return results

    # Diagnostics
    # -----------

    def bench(self, image_path, repeats=5):
    #======================================
        """
        Time each stage of the pipeline on one image, writing ``bench.csv``.

        :rtype: :class:`~midfea.output.bench.StageTimings`
        """
        model = self.__store.load_pipeline()
        img = read_image(image_path)
        ns_model = self.__ns_model()
        try:
            clf = self.__store.load_classifier(MIDFEA_NS if ns_model is not None else MIDFEA)
        except MissingArtifactError:
            clf = None
        timings = run_benchmark(img, model, ns_model, clf, repeats=repeats, threads=self.__threads)
        timings.write_csv(self.__store.path('bench.csv'))
        return timings

    def export_maps(self, image_path, out_dir, stage):
    #=================================================
        bank = self.__store.load_filter_bank()
        return export_maps(read_image(image_path), bank, pathlib.Path(out_dir), stage)

#===============================================================================

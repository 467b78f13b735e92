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
Datasets of labelled images.

A dataset is either a directory with one subdirectory of images per class
(``root/<label>/<image>.pgm``), or a manifest file of tab-separated
``path``, ``label`` and ``split`` columns, paths being relative to the
manifest's directory.

In a class directory the first half of the images (sorted by name, rounding
up) are for training and the rest for testing.
"""

#===============================================================================

from collections import namedtuple
import pathlib

#===============================================================================

import numpy as np

#===============================================================================

from midfea.exceptions import DataError
from midfea.utils import ProgressBar, log

from .netpbm import read_image

#===============================================================================

IMAGE_SUFFIXES = ['.pgm', '.ppm']

MANIFEST_NAME = 'manifest.tsv'

TRAIN = 'train'
TEST = 'test'
SPLITS = [TRAIN, TEST]

#===============================================================================

ManifestEntry = namedtuple('ManifestEntry', 'path label split')

#===============================================================================

def _label_key(labels):
    if all(_is_integer(label) for label in labels):
        return lambda label: (int(label), label)
    return lambda label: label

def _is_integer(text):
    try:
        int(text)
        return True
    except ValueError:
        return False

#===============================================================================

class DatasetManifest(object):
    """
    :param root: the dataset's directory
    :param entries: a list of :class:`ManifestEntry`
    """
    def __init__(self, root, entries):
        self.__root = pathlib.Path(root)
        if len(entries) == 0:
            raise DataError('Dataset {} has no images'.format(root))
        for entry in entries:
            if entry.split not in SPLITS:
                raise DataError('{}: unknown split "{}", expected one of {}'
                                .format(entry.path, entry.split, ', '.join(SPLITS)))
        missing = [str(entry.path) for entry in entries if not pathlib.Path(entry.path).is_file()]
        if len(missing):
            raise DataError('Dataset {} has missing images: {}'.format(root, ', '.join(missing[:5])
                            + (' ...' if len(missing) > 5 else '')))
        labels = {entry.label for entry in entries}
        self.__classes = sorted(labels, key=_label_key(labels))
        self.__class_index = {label: n for n, label in enumerate(self.__classes)}
        self.__entries = sorted(entries, key=lambda e: (SPLITS.index(e.split),
                                                        self.__class_index[e.label], str(e.path)))
        self.__numeric = all(_is_integer(label) for label in labels)

    def __len__(self):
        return len(self.__entries)

    def __str__(self):
        return 'Dataset {}: {} images in {} classes'.format(self.__root, len(self), len(self.__classes))

    @property
    def classes(self):
        """
        Class labels, in class index order.
        """
        return self.__classes

    @property
    def entries(self):
        return self.__entries

    @property
    def numeric_labels(self) -> bool:
        return self.__numeric

    @property
    def root(self):
        return self.__root

    def class_index(self, label):
    #============================
        return self.__class_index[label]

    def counts(self):
    #================
        """
        :returns: a dictionary of ``label`` to a dictionary of split to count
        """
        counts = {label: {split: 0 for split in SPLITS} for label in self.__classes}
        for entry in self.__entries:
            counts[entry.label][entry.split] += 1
        return counts

    def split(self, name):
    #=====================
        return [entry for entry in self.__entries if entry.split == name]

    def labels(self, split):
    #=======================
        """
        Class indices of a split's images.
        """
        return np.array([self.__class_index[entry.label] for entry in self.split(split)], dtype=np.int64)

    def label_values(self, split):
    #=============================
        """
        Numeric labels of a split's images, e.g. ages.
        """
        if not self.__numeric:
            raise DataError('Dataset {} does not have numeric labels'.format(self.__root))
        return np.array([int(entry.label) for entry in self.split(split)], dtype=np.int64)

    def load_images(self, split):
    #============================
        entries = self.split(split)
        images = []
        with ProgressBar(total=len(entries), unit='img', desc='Reading {} images'.format(split)) as progress:
            for entry in entries:
                images.append(read_image(entry.path))
                progress.update(1)
        return images

    def require_splits(self):
    #========================
        """
        :raises DataError: unless there are training and test images
        """
        for split in SPLITS:
            if len(self.split(split)) == 0:
                raise DataError('Dataset {} has no {} images'.format(self.__root, split))

    def write(self, path):
    #=====================
        """
        Write a manifest file, with paths relative to its directory.
        """
        path = pathlib.Path(path)
        base = path.parent.resolve()
        with open(path, 'w') as fp:
            for entry in self.__entries:
                relative = pathlib.Path(entry.path).resolve().relative_to(base)
                fp.write('{}\t{}\t{}\n'.format(relative.as_posix(), entry.label, entry.split))

#===============================================================================

def _directory_entries(root):
    entries = []
    for class_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        images = sorted(p for p in class_dir.iterdir()
                            if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES)
        if len(images) == 0:
            raise DataError('Class directory {} has no images'.format(class_dir))
        training = (len(images) + 1)//2
        for n, image in enumerate(images):
            entries.append(ManifestEntry(image, class_dir.name, TRAIN if n < training else TEST))
    return entries

def _manifest_entries(path):
    entries = []
    base = path.parent
    with open(path, 'r') as fp:
        for line_number, line in enumerate(fp.read().splitlines(), 1):
            if line.strip() == '' or line.lstrip().startswith('#'):
                continue
            fields = line.split('\t')
            if len(fields) != 3:
                raise DataError('{}:{}: expected "path<TAB>label<TAB>split"'.format(path, line_number))
            image, label, split = (field.strip() for field in fields)
            if label == '':
                raise DataError('{}:{}: empty label'.format(path, line_number))
            entries.append(ManifestEntry(base / image, label, split))
    return entries

def ingest(source):
#==================
    """
    Load a dataset description from a class directory tree or a manifest file.

    A directory containing ``manifest.tsv`` is read through that manifest.

    :rtype: DatasetManifest
    :raises DataError: for missing images, empty classes or malformed manifests
    """
    source = pathlib.Path(source)
    if source.is_dir():
        if (source/MANIFEST_NAME).is_file():
            source = source/MANIFEST_NAME
            entries = _manifest_entries(source)
            root = source.parent
        else:
            entries = _directory_entries(source)
            root = source
    elif source.is_file():
        entries = _manifest_entries(source)
        root = source.parent
    else:
        raise DataError('No dataset at {}'.format(source))
    manifest = DatasetManifest(root, entries)
    log.debug(str(manifest))
    return manifest

#===============================================================================

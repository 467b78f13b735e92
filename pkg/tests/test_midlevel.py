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

import numpy as np
import pytest

#===============================================================================

from midfea.exceptions import InvalidArgumentError
from midfea.lowlevel import DescriptorField, GrayImage, describe
from midfea.midlevel import (PARTITION_PRESETS, CodeMap, Codebook, PartitionSpec, PipelineModel,
                             extract_features, extract_midfeature, learn_codebook,
                             pooled_length, project_normalize, projection_matrix,
                             spatial_pool, vq_encode)
from midfea.numerics import SeededRng

#===============================================================================

def nearest_oracle(descriptor, words):
    best, best_distance = None, None
    for j in range(words.shape[1]):
        distance = sum((descriptor[i] - words[i, j])**2 for i in range(len(descriptor)))
        if best is None or distance < best_distance:
            best, best_distance = j, distance
    return best

def grid_pool_oracle(codes, cb_size, rows, cols):
    height, width = codes.shape
    blocks = []
    for i in range(rows):
        for j in range(cols):
            block = np.zeros(cb_size)
            for r in range(height):
                for c in range(width):
                    if ((height*i)//rows <= r < (height*(i + 1))//rows
                    and (width*j)//cols <= c < (width*(j + 1))//cols):
                        block[codes[r, c]] = 1.0
            blocks.append(block)
    return np.concatenate(blocks)

#===============================================================================

class TestVectorQuantisation:
    def test_matches_oracle(self, rng):
        for _ in range(50):
            field = DescriptorField(rng.uniform(0.0, 1.0, (int(rng.integers(1, 5)), int(rng.integers(1, 5)), 6)))
            words = rng.uniform(0.0, 1.0, (6, int(rng.integers(2, 10))))
            codes = vq_encode(field, Codebook(words))
            for r in range(field.height):
                for c in range(field.width):
                    assert codes.codes[r, c] == nearest_oracle(field.values[r, c], words)

    def test_exact_codeword(self, rng):
        words = rng.uniform(0.0, 1.0, (4, 10))
        field = DescriptorField(words[:, 7].reshape(1, 1, 4))
        assert vq_encode(field, Codebook(words)).codes[0, 0] == 7

    def test_ties_go_low(self):
        words = np.array([[5.0, 9.0, 0.0, 7.0, 8.0, 2.0]])
        assert vq_encode(DescriptorField([[[1.0]]]), Codebook(words)).codes[0, 0] == 2

    def test_stride(self, rng):
        field = DescriptorField(rng.uniform(0.0, 1.0, (5, 4, 3)))
        codes = vq_encode(field, Codebook(rng.uniform(0.0, 1.0, (3, 4))), stride=2)
        assert codes.shape == (3, 2)
        assert codes.pixel_step == 4

    def test_dimension_mismatch(self, rng):
        with pytest.raises(InvalidArgumentError):
            vq_encode(DescriptorField(np.zeros((2, 2, 3))), Codebook(np.zeros((4, 2))))

#===============================================================================

class TestCodebook:
    def test_one_word_per_cluster(self, rng):
        centres = np.array([[8.0, 0.0, 0.0], [0.0, 8.0, 0.0], [0.0, 0.0, 8.0]])
        grid = np.repeat(centres.T[np.newaxis], 4, axis=0)
        fields = [DescriptorField(grid + 0.01*rng.uniform(0.0, 1.0, grid.shape)) for _ in range(3)]
        codebook = learn_codebook(fields, m=3, sample_cap=100, rng=rng)
        matched = set()
        for j in range(3):
            distances = np.sqrt(np.sum((centres - codebook.words[:, [j]])**2, axis=0))
            assert distances.min() < 0.05
            matched.add(int(np.argmin(distances)))
        assert matched == {0, 1, 2}

    def test_distinct_descriptors_become_words(self, rng):
        values = np.array([[[0.0, 1.0], [1.0, 0.0]], [[2.0, 2.0], [0.5, 3.0]]])
        codebook = learn_codebook([DescriptorField(values)], m=4, sample_cap=10, rng=rng)
        assert sorted(map(tuple, codebook.words.T)) == sorted(map(tuple, values.reshape(-1, 2)))

    def test_reproducible(self, rng):
        fields = [DescriptorField(rng.uniform(0.0, 1.0, (6, 6, 4))) for _ in range(3)]
        first = learn_codebook(fields, m=5, sample_cap=50, rng=SeededRng(9))
        second = learn_codebook(fields, m=5, sample_cap=50, rng=SeededRng(9))
        np.testing.assert_array_equal(first.words, second.words)

    def test_too_few_descriptors(self, rng):
        with pytest.raises(InvalidArgumentError):
            learn_codebook([DescriptorField(np.ones((2, 2, 3)))], m=5, sample_cap=100, rng=rng)

#===============================================================================

class TestPartitions:
    def test_parse_and_format(self):
        for text in ['pyramid:3', 'grid:3x3', 'overlap:8,8', 'overlap:8,4', 'grid:2x5']:
            assert str(PartitionSpec.parse(text)) == text
        assert PartitionSpec.parse('faces') == PartitionSpec.parse(PARTITION_PRESETS['faces'])
        assert PartitionSpec.parse('objects') == PartitionSpec('pyramid', 3)

    def test_invalid(self):
        for text in ['pyramid:0', 'grid:0x2', 'overlap:4,8', 'circles:3', 'grid:3']:
            with pytest.raises(InvalidArgumentError):
                PartitionSpec.parse(text)

    def test_pyramid_length(self):
        partition = PartitionSpec.parse('pyramid:3')
        assert len(partition.regions(12, 12)) == 21
        assert pooled_length(partition, 500, 28, 28) == 21*500

    def test_overlap_cells(self):
        regions = PartitionSpec.parse('overlap:8,8').regions(28, 28, pixel_step=2)
        assert len(regions) == 49
        assert all(r1 - r0 == 4 and c1 - c0 == 4 for (r0, r1, c0, c1) in regions)
        overlapping = PartitionSpec.parse('overlap:8,4').regions(28, 28, pixel_step=2)
        assert len(overlapping) == 13*13

    def test_empty_cells_pool_to_zero(self):
        codes = CodeMap(np.zeros((1, 1), dtype=int))
        pooled = spatial_pool(codes, 3, PartitionSpec.parse('grid:2x2'))
        assert pooled.shape == (12,)
        np.testing.assert_array_equal(pooled, [0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0])

#===============================================================================

class TestSpatialPooling:
    def test_presence(self):
        codes = CodeMap([[0, 2], [2, 0]])
        np.testing.assert_array_equal(spatial_pool(codes, 4, PartitionSpec.parse('grid:1x1')),
                                      [1.0, 0.0, 1.0, 0.0])

    def test_grid_matches_oracle(self, rng):
        for _ in range(50):
            shape = (int(rng.integers(1, 9)), int(rng.integers(1, 9)))
            codes = rng.integers(0, 6, size=shape)
            pooled = spatial_pool(CodeMap(codes), 6, PartitionSpec.parse('grid:3x3'))
            np.testing.assert_array_equal(pooled, grid_pool_oracle(codes, 6, 3, 3))

    def test_pyramid_is_binary(self, rng):
        codes = CodeMap(rng.integers(0, 10, size=(9, 11)))
        pooled = spatial_pool(codes, 10, PartitionSpec.parse('pyramid:3'))
        assert pooled.shape == (210,)
        assert set(np.unique(pooled)) <= {0.0, 1.0}
        np.testing.assert_array_equal(pooled[:10], np.bincount(codes.codes.ravel(), minlength=10) > 0)

    def test_codebook_permutation(self, rng):
        field = DescriptorField(rng.uniform(0.0, 1.0, (6, 6, 5)))
        words = rng.uniform(0.0, 1.0, (5, 7))
        permutation = rng.permutation(7)
        partition = PartitionSpec.parse('pyramid:2')
        pooled = spatial_pool(vq_encode(field, Codebook(words)), 7, partition).reshape(-1, 7)
        permuted = spatial_pool(vq_encode(field, Codebook(words[:, permutation])), 7, partition).reshape(-1, 7)
        np.testing.assert_array_equal(permuted, pooled[:, permutation])

    def test_codes_out_of_range(self):
        with pytest.raises(InvalidArgumentError):
            spatial_pool(CodeMap([[0, 4]]), 4, PartitionSpec.parse('grid:1x1'))

#===============================================================================

class TestProjection:
    def test_reproducible(self):
        np.testing.assert_array_equal(projection_matrix(50, 10, SeededRng(4)),
                                      projection_matrix(50, 10, SeededRng(4)))

    def test_entry_statistics(self, rng):
        P = projection_matrix(200, 200, rng)
        assert abs(P.mean()) < 3.0/np.sqrt(P.size)
        assert P.std() == pytest.approx(1.0/np.sqrt(200), rel=0.02)

    def test_no_expansion(self, rng):
        with pytest.raises(InvalidArgumentError):
            projection_matrix(10, 20, rng)

    def test_normalise(self, rng):
        P = projection_matrix(30, 8, rng)
        v = rng.uniform(0.0, 1.0, 30)
        feature = project_normalize(v, P)
        assert np.linalg.norm(feature.values) == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(project_normalize(5.0*v, P).values, feature.values, atol=1e-15)
        zero = project_normalize(np.zeros(30), P)
        assert zero.is_zero and zero.dim == 8
        with pytest.raises(InvalidArgumentError):
            project_normalize(np.ones(29), P)

    @pytest.mark.slow
    def test_distances_preserved(self):
        rng = SeededRng(2)
        P = projection_matrix(20000, 3000, rng)
        distortions = []
        for start in range(0, 1000, 250):
            x = rng.normal(1.0, (20000, 250))
            y = rng.normal(1.0, (20000, 250))
            diffs = x/np.linalg.norm(x, axis=0) - y/np.linalg.norm(y, axis=0)
            distortions.append(np.abs(np.linalg.norm(P @ diffs, axis=0)/np.linalg.norm(diffs, axis=0) - 1.0))
        distortions = np.concatenate(distortions)
        assert distortions.max() <= 0.15
        assert np.mean(distortions <= 0.10) >= 0.99

#===============================================================================

class TestExtraction:
    def test_zero_image_codes(self, small_pipeline):
        model = small_pipeline
        field = describe(np.zeros((32, 32)), model.bank)
        codes = vq_encode(field, model.codebook)
        assert len(np.unique(codes.codes)) == 1
        pooled = spatial_pool(codes, model.codebook.size, model.partition)
        assert pooled.sum() == len(model.partition.regions(codes.height, codes.width))

    def test_unit_length(self, small_pipeline, textures):
        for img in textures:
            feature = extract_midfeature(img, small_pipeline)
            assert feature.dim == small_pipeline.feature_dim
            assert np.linalg.norm(feature.values) == pytest.approx(1.0, abs=1e-12)

    def test_scale_invariance(self, small_pipeline, textures):
        pixels = textures[1].pixels
        expected = extract_midfeature(pixels, small_pipeline).values
        for scale in [0.25, 0.5, 2.0]:
            np.testing.assert_array_equal(extract_midfeature(scale*pixels, small_pipeline).values, expected)

    def test_threads_do_not_change_features(self, small_pipeline, textures):
        single = extract_features(textures, small_pipeline, threads=1)
        assert single.shape == (16, len(textures))
        np.testing.assert_array_equal(extract_features(textures, small_pipeline, threads=3), single)

    def test_image_size_mismatch(self, small_pipeline, rng):
        # 32x32 images give 13x13 codes, so three 8 pixel cells each way
        partition = PartitionSpec.parse('overlap:8,8')
        in_dim = pooled_length(partition, small_pipeline.codebook.size, 13, 13)
        model = PipelineModel(small_pipeline.bank, small_pipeline.codebook, partition,
                              projection_matrix(in_dim, 16, rng))
        assert in_dim == 9*small_pipeline.codebook.size
        extract_midfeature(GrayImage(np.zeros((32, 32))), model)
        with pytest.raises(InvalidArgumentError):
            extract_midfeature(GrayImage(np.zeros((48, 48))), model)

    def test_codebook_must_fit_filters(self, small_pipeline):
        with pytest.raises(InvalidArgumentError):
            PipelineModel(small_pipeline.bank, Codebook(np.zeros((10, 4))),
                          small_pipeline.partition, small_pipeline.projection)

#===============================================================================

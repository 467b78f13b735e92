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

from midfea.exceptions import (DimensionOverflowError, ExcessPayloadError, InvalidArgumentError,
                               MalformedHeaderError, NonFinitePayloadError, ParseError,
                               TruncatedPayloadError)
from midfea.numerics import (SeededRng, kmeans, kmeans_objective, l21_norm, matrix,
                             nearest_columns, normalise_columns, read_matrix, read_tensor,
                             read_vector, write_matrix, write_tensor, write_vector)
from midfea.numerics.fileformat import MATRIX_MAGIC, MAX_ELEMENTS

#===============================================================================

class TestArrays:
    def test_l21_examples(self):
        assert l21_norm([[3.0, 4.0], [0.0, 0.0]]) == 5.0
        assert l21_norm(np.zeros((3, 4))) == 0.0
        assert l21_norm(np.eye(2)) == 2.0

    def test_l21_bounds_frobenius(self, rng):
        for _ in range(20):
            m = rng.normal(1.0, (4, 3))
            assert l21_norm(m) >= np.linalg.norm(m) - 1e-12
        single = np.zeros((4, 3))
        single[2] = [1.0, -2.0, 2.0]
        assert l21_norm(single) == pytest.approx(np.linalg.norm(single))

    def test_matrix_is_frozen_and_finite(self):
        m = matrix([[1, 2], [3, 4]])
        assert m.dtype == np.float64
        assert not m.flags.writeable
        with pytest.raises(InvalidArgumentError):
            matrix([[1.0, np.nan]])
        with pytest.raises(InvalidArgumentError):
            matrix([1.0, 2.0])

    def test_normalise_columns(self):
        m = np.array([[3.0, 0.0], [4.0, 0.0]])
        np.testing.assert_array_equal(normalise_columns(m), [[0.6, 0.0], [0.8, 0.0]])

    def test_nearest_matches_scan(self, rng):
        points = rng.normal(1.0, (6, 300))
        centres = rng.normal(1.0, (6, 17))
        indices, distances = nearest_columns(points, centres)
        for n in range(points.shape[1]):
            exact = [np.sum((points[:, n] - centres[:, j])**2) for j in range(centres.shape[1])]
            assert indices[n] == int(np.argmin(exact))
            assert distances[n] == pytest.approx(min(exact))

    def test_nearest_ties_go_low(self):
        indices, _ = nearest_columns([[1.0]], [[5.0, 2.0, 0.0, 2.0]])
        assert indices[0] == 1

#===============================================================================

class TestKmeans:
    def test_distinct_points_are_centroids(self, rng):
        points = np.array([[0.0, 3.0, 7.0]])
        centres = kmeans(points, 3, rng)
        np.testing.assert_array_equal(np.sort(centres[0]), [0.0, 3.0, 7.0])

    def test_two_pairs(self, rng):
        points = np.array([[0.0, 0.1, 10.0, 10.1]])
        centres = np.sort(kmeans(points, 2, rng)[0])
        np.testing.assert_allclose(centres, [0.05, 10.05])

    def test_identical_points(self, rng):
        points = np.tile([[1.5], [-2.0]], (1, 10))
        np.testing.assert_array_equal(kmeans(points, 1, rng), [[1.5], [-2.0]])

    def test_too_few_points(self, rng):
        with pytest.raises(InvalidArgumentError):
            kmeans(np.zeros((2, 3)), 4, rng)

    def test_objective_never_increases(self, rng):
        points = rng.normal(1.0, (3, 400))
        trace = []
        kmeans(points, 6, rng, objective_trace=trace)
        assert len(trace) >= 1
        assert all(later <= earlier + 1e-9 for earlier, later in zip(trace, trace[1:]))

    def test_reproducible(self):
        points = SeededRng(3).normal(1.0, (4, 200))
        first = kmeans(points, 5, SeededRng(8))
        second = kmeans(points, 5, SeededRng(8))
        np.testing.assert_array_equal(first, second)

    def test_objective_value(self):
        points = np.array([[0.0, 2.0, 10.0]])
        centres = np.array([[1.0, 10.0]])
        assert kmeans_objective(points, centres, np.array([0, 0, 1])) == 2.0

#===============================================================================

class TestRng:
    def test_same_seed_same_stream(self):
        np.testing.assert_array_equal(SeededRng(42).uniform(0.0, 1.0, 10),
                                      SeededRng(42).uniform(0.0, 1.0, 10))

    def test_derived_streams_are_independent_of_use(self):
        parent = SeededRng(42)
        first = parent.derive('codebook').normal(1.0, 5)
        parent.uniform(0.0, 1.0, 100)
        parent.derive('filters').normal(1.0, 5)
        np.testing.assert_array_equal(parent.derive('codebook').normal(1.0, 5), first)
        assert not np.array_equal(SeededRng(42).derive('filters').normal(1.0, 5), first)

    def test_seed_range(self):
        SeededRng(2**64 - 1)
        with pytest.raises(InvalidArgumentError):
            SeededRng(-1)
        with pytest.raises(InvalidArgumentError):
            SeededRng(2**64)

    def test_stream_is_seeded_pcg64(self):
        rng = SeededRng(42)
        assert rng.algorithm == 'PCG64'
        reference = np.random.Generator(np.random.PCG64(np.random.SeedSequence(42)))
        np.testing.assert_array_equal(rng.uniform(0.0, 1.0, 10), reference.uniform(0.0, 1.0, 10))
        np.testing.assert_array_equal(rng.normal(2.0, 5), reference.normal(0.0, 2.0, 5))

    def test_sample_without_replacement(self, rng):
        sample = rng.sample_without_replacement(100, 30)
        assert len(set(sample.tolist())) == 30
        assert np.all(np.diff(sample) > 0)
        np.testing.assert_array_equal(rng.sample_without_replacement(5, 10), np.arange(5))

#===============================================================================

class TestFileFormat:
    def test_matrix_round_trip(self, tmp_path, rng):
        for n in range(5):
            shape = tuple(rng.integers(1, 9, size=2))
            m = rng.normal(10.0, shape)
            path = tmp_path/'m{}.mat'.format(n)
            write_matrix(path, m)
            np.testing.assert_array_equal(read_matrix(path), m)

    def test_tensor_round_trip(self, tmp_path, rng):
        t = rng.normal(1.0, (3, 4, 5))
        write_tensor(tmp_path/'t.ten', t)
        np.testing.assert_array_equal(read_tensor(tmp_path/'t.ten'), t)

    def test_vector_round_trip(self, tmp_path):
        write_vector(tmp_path/'v.mat', [1.0, -0.5, 1e-300])
        np.testing.assert_array_equal(read_vector(tmp_path/'v.mat'), [1.0, -0.5, 1e-300])

    def test_layout(self, tmp_path):
        write_matrix(tmp_path/'m.mat', [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
        data = (tmp_path/'m.mat').read_bytes()
        assert data.startswith(b'MFEA-MAT 1\n2 3\n')
        np.testing.assert_array_equal(np.frombuffer(data[len(b'MFEA-MAT 1\n2 3\n'):], dtype='<f8'),
                                      [1.0, 2.0, 3.0, 4.0, 5.0, 6.0])

    def __write(self, path, dims, values):
        path.write_bytes(MATRIX_MAGIC + b'\n' + dims + b'\n' + np.array(values, dtype='<f8').tobytes())
        return path

    def test_truncated(self, tmp_path):
        with pytest.raises(TruncatedPayloadError):
            read_matrix(self.__write(tmp_path/'m.mat', b'2 2', [1.0, 2.0, 3.0]))

    def test_excess(self, tmp_path):
        with pytest.raises(ExcessPayloadError):
            read_matrix(self.__write(tmp_path/'m.mat', b'1 2', [1.0, 2.0, 3.0]))

    def test_overflow(self, tmp_path):
        dims = '{} 2'.format(MAX_ELEMENTS).encode('ascii')
        with pytest.raises(DimensionOverflowError):
            read_matrix(self.__write(tmp_path/'m.mat', dims, []))

    def test_non_finite(self, tmp_path):
        with pytest.raises(NonFinitePayloadError):
            read_matrix(self.__write(tmp_path/'m.mat', b'1 2', [1.0, np.inf]))

    def test_wrong_magic(self, tmp_path):
        path = tmp_path/'m.mat'
        path.write_bytes(b'MFEA-TEN 1\n1 1 1\n' + np.zeros(1, dtype='<f8').tobytes())
        with pytest.raises(MalformedHeaderError):
            read_matrix(path)
        with pytest.raises(ParseError):
            read_matrix(self.__write(tmp_path/'bad.mat', b'two 2', [1.0, 2.0]))

#===============================================================================

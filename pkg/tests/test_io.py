from fractions import Fraction

import numpy as np
import pytest

from orbitmle.io import InputError, read_graph, read_sample_matrix, read_sample_tuple


def test_sample_tuple(data_dir):
    Y = read_sample_tuple(data_dir / "ex33.json")
    assert Y.shape == (2, 2, 2)
    np.testing.assert_array_equal(Y[1], [[0, -1], [1, 0]])


@pytest.mark.parametrize(
    "text, needle",
    [
        ("[1, 2]", "JSON object"),
        ('{"m1": 2, "m2": 2, "n": 1}', "missing"),
        ('{"m1": 0, "m2": 2, "n": 1, "matrices": []}', "'m1'"),
        ('{"m1": 1, "m2": 1, "n": 2, "matrices": [[[1]]]}', "n = 2"),
        ('{"m1": 1, "m2": 1, "n": 1, "matrices": [[["x"]]]}', "not a number"),
    ],
)
def test_sample_tuple_errors(tmp_path, text, needle):
    f = tmp_path / "s.json"
    f.write_text(text)
    with pytest.raises(InputError, match=needle):
        read_sample_tuple(f)


def test_sample_matrix_csv(tmp_path):
    f = tmp_path / "y.csv"
    f.write_text("# header comment\n1/2, 0.25\n\n3, -1\n")
    exact = read_sample_matrix(f, exact=True)
    assert exact == [[Fraction(1, 2), Fraction(1, 4)], [3, -1]]
    g = tmp_path / "z.csv"
    g.write_text("0.5, 0.25\n3, -1\n")
    np.testing.assert_array_equal(read_sample_matrix(g), [[0.5, 0.25], [3.0, -1.0]])


def test_sample_matrix_float_rejects_fraction_syntax(tmp_path):
    f = tmp_path / "y.csv"
    f.write_text("1/2,0\n")
    with pytest.raises(InputError) as exc:
        read_sample_matrix(f)
    assert exc.value.line == 1 and exc.value.col == 1


def test_sample_matrix_ragged(tmp_path):
    f = tmp_path / "y.csv"
    f.write_text("1,2\n3\n")
    with pytest.raises(InputError, match="expected 2"):
        read_sample_matrix(f)


def test_sample_matrix_json(tmp_path):
    f = tmp_path / "y.json"
    f.write_text('{"rows": [[1, 2], [3, 4]]}')
    np.testing.assert_array_equal(read_sample_matrix(f), [[1, 2], [3, 4]])


def test_edge_list(tmp_path):
    f = tmp_path / "g.edges"
    f.write_text("# fork\n3 1  # comment\n3 2\n4\n")
    g = read_graph(f)
    assert g.nodes == (1, 2, 3, 4)
    assert g.parents(1) == [3]
    assert g.parents(4) == []


def test_edge_list_mixed_labels(tmp_path):
    f = tmp_path / "g.edges"
    f.write_text("a 1\n")
    with pytest.raises(InputError, match="mix"):
        read_graph(f)


def test_empty_graph(tmp_path):
    f = tmp_path / "g.edges"
    f.write_text("# nothing\n")
    with pytest.raises(InputError):
        read_graph(f)

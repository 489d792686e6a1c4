from corpus import a2_window, full_graph
from momentgraphs.cli import main
from momentgraphs.plotting import plot_dimension_table, plot_moment_graph

PNG = b"\x89PNG"


def test_plot_moment_graph(tmp_path):
    path = tmp_path / "g.png"
    plot_moment_graph(full_graph(a2_window(1, 4)), str(path), title="window", stalk_ranks=[1] * 12)
    assert path.read_bytes().startswith(PNG)


def test_plot_dimension_table(tmp_path):
    path = tmp_path / "t.png"
    plot_dimension_table({"Z": [1, 2, 2], "End": [1, 2, 2]}, str(path))
    assert path.read_bytes().startswith(PNG)


def test_cli_plot_option(tmp_path, capsys):
    for cmd in ("graph", "zbasis", "bm"):
        path = tmp_path / f"{cmd}.png"
        assert main([cmd, "--type", "A2", "--subset", "0,1", "--max-degree", "2", "--plot", str(path)]) == 0
        assert path.read_bytes().startswith(PNG)
    capsys.readouterr()

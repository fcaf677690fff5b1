"""End-to-end smoke tests for the python bindings."""

import numpy as np
import pytest

import graphrl


def test_graph_from_array_round_trips_every_format():
    adjacency = np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]], dtype=np.uint8)
    graph = graphrl.Graph.from_array("adjacency_colors", adjacency)
    assert graph.order == 3
    assert graph.edge_colors == 2
    assert graph.fully_colored
    assert graph.batch_size is None
    names = graphrl.format_names()
    assert len(names) == 8
    for name in names:
        array = graph.to_array(name)
        again = graphrl.Graph.from_array(name, array)
        assert again == graph
    assert graph.to_array("flat_row_major_colors").tolist() == [1, 1, 1]


def test_bitmask_line_round_trip():
    line = "3 1 0 4 8 12 0 0 6 0 9 2"
    graph = graphrl.Graph.from_bitmask_line(line)
    assert (graph.order, graph.edge_colors, graph.directed) == (4, 3, True)
    assert graph.bitmask_line() == line


def test_batches_and_invariants():
    batch = np.zeros((2, 5, 5), dtype=np.uint8)
    batch[0] = 1 - np.eye(5, dtype=np.uint8)  # complete graph
    batch[1, 0, 1] = batch[1, 1, 0] = 1  # single edge
    graphs = graphrl.Graph.from_array("adjacency_colors", batch)
    assert graphs.batch_size == 2
    assert graphrl.evaluate("degree_square_sum", graphs) == [80.0, 2.0]
    assert graphs.select(0).color_at(0, 0, 1) == 1
    assert "conjecture1" in graphrl.invariant_names()
    with pytest.raises(Exception, match="unknown invariant"):
        graphrl.evaluate("not_a_real_invariant", graphs)


def tiny_config(tmp_path, **overrides):
    config = graphrl.RunConfig()
    config.invariant = "degree_square_sum"
    config.order = 3
    config.seed = 5
    config.hidden = [8]
    config.dropout = 0.0
    config.episodes = 12
    config.target_score = 11.0
    config.max_steps = 6
    config.out = str(tmp_path / "search")
    for key, value in overrides.items():
        setattr(config, key, value)
    return config


def test_run_and_check_close_the_loop(tmp_path):
    config = tiny_config(tmp_path)
    rc, progress, diagnostics = graphrl.run(config)
    assert rc == 0, diagnostics
    assert "success" in progress
    rc, verdicts, _ = graphrl.check(config.out + "/solutions.txt", "degree_square_sum", 11.0)
    assert rc == 0
    assert verdicts.endswith("1/1 valid\n")
    header = (tmp_path / "search" / "scores.csv").read_text().splitlines()[0]
    assert header == "step,best_score,generation_mean,elapsed_ms"


def test_agent_loop_matches_config(tmp_path):
    agent = graphrl.make_agent(tiny_config(tmp_path))
    for _ in range(3):
        agent.step()
    assert agent.step_count == 3
    assert agent.best_score == 12.0  # K3 maximizes the degree-square sum
    assert agent.has_best_graph
    best = agent.best_graph
    assert best.order == 3 and best.fully_colored
    assert graphrl.evaluate("degree_square_sum", best) == [12.0]


def test_convert_between_text_formats(tmp_path):
    source = tmp_path / "graph.bitmask"
    source.write_text("3 1 0 4 8 12 0 0 6 0 9 2\n")
    target = tmp_path / "graph.adjacency"
    rc, diagnostics = graphrl.convert(str(source), "bitmask_out", str(target), "adjacency_colors")
    assert rc == 0, diagnostics
    back = tmp_path / "back.bitmask"
    rc, _ = graphrl.convert(str(target), "adjacency_colors", str(back), "bitmask_out")
    assert rc == 0
    assert back.read_text() == source.read_text()
    rc, diagnostics = graphrl.convert(str(source), "bitmask_out", str(target), "no_such_format")
    assert rc == 2
    assert "unknown graph format" in diagnostics


def test_load_config_parses_keys_and_comments(tmp_path):
    path = tmp_path / "search.cfg"
    path.write_text(
        "# search setup\n"
        "invariant = conjecture1\n"
        "order = 16\n"
        "restart_every = 1000\n"
        "hidden = 72,12\n"
    )
    config = graphrl.load_config(str(path))
    assert config.invariant == "conjecture1"
    assert config.order == 16
    assert config.restart_every == 1000
    assert config.hidden == [72, 12]
    assert config.agent == "dce"

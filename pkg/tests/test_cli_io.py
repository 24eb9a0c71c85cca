import json
from pathlib import Path

import pytest

from polytopic.chords import EmptyContentError, LabelParseError
from polytopic.cli import main
from polytopic.songio import (
    SongFormatError,
    frontiers_from_intervals,
    load_reference,
    load_song,
    load_songs,
    song_from_dict,
)

DATA = Path(__file__).parent / "data"


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_json_song_replaces_silences(tmp_path):
    song = load_song(write(tmp_path, "x.json", '{"beats": ["C", "N", "G"]}'))
    assert [c.render() for c in song.chords] == ["C", "C", "G"]
    assert song.id == "x"
    assert song.silences_replaced == 1


def test_csv_song(tmp_path):
    song = load_song(write(tmp_path, "y.csv", "C\nAm\n"))
    assert len(song) == 2
    song = load_song(write(tmp_path, "z.csv", "C,0.0\nAm,0.5\nN,1.0\n"))
    assert [c.render() for c in song.chords] == ["C", "Am", "Am"]


def test_tab_separated_song(tmp_path):
    song = load_song(write(tmp_path, "t.txt", "G\t1\nD\t2\n"))
    assert [c.render() for c in song.chords] == ["G", "D"]


def test_frontier_at_first_beat_is_rejected(tmp_path):
    with pytest.raises(SongFormatError):
        load_song(write(tmp_path, "f.json", '{"beats": ["C", "G"], "frontiers": [1]}'))
    with pytest.raises(SongFormatError):
        load_song(write(tmp_path, "g.json", '{"beats": ["C", "G"], "frontiers": [3]}'))
    with pytest.raises(SongFormatError):
        song_from_dict({"beats": ["C", "G", "F"], "frontiers": [3, 2]})


def test_bad_label_reports_beat(tmp_path):
    with pytest.raises(LabelParseError, match="beat 2"):
        load_song(write(tmp_path, "bad.csv", "C\nC7\n"))


def test_empty_files(tmp_path):
    with pytest.raises(EmptyContentError):
        load_song(write(tmp_path, "e.csv", ""))
    with pytest.raises(EmptyContentError):
        load_song(write(tmp_path, "s.json", '{"beats": ["N", "N"]}'))
    with pytest.raises(SongFormatError):
        load_song(write(tmp_path, "o.json", '{"chords": []}'))


def test_reserialisation_is_identical():
    for path in sorted(DATA.glob("*.json")):
        song = load_song(path)
        assert song.to_dict() == json.loads(path.read_text())


def test_load_songs_sorted():
    assert [s.id for s in load_songs(DATA)] == ["song1", "song2", "song3"]


def test_references(tmp_path):
    assert load_reference(write(tmp_path, "a.txt", "33 65\n97")) == [33, 65, 97]
    assert load_reference(write(tmp_path, "b.json", "[5, 9]")) == [5, 9]
    assert load_reference(write(tmp_path, "c.json", '{"frontiers": [5]}')) == [5]
    with pytest.raises(SongFormatError):
        load_reference(write(tmp_path, "d.txt", "9 5"))


def test_intervals_to_frontiers():
    assert frontiers_from_intervals([[1, 32], [33, 64], [65, 80]]) == [33, 65]
    assert frontiers_from_intervals([[0, 31], [32, 63]], one_based=False) == [33]


def test_enumerate_shapes_cli(capsys):
    assert main(["enumerate-shapes", "4"]) == 0
    assert "[[1,1],[1,1]]" in capsys.readouterr().out.splitlines()
    assert main(["enumerate-shapes", "11"]) == 0
    assert capsys.readouterr().out == ""


def test_segment_cli(capsys, tmp_path):
    assert main(["segment", str(DATA / "song1.json")]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["frontiers"] == [33, 65, 97, 129, 161]
    assert data["config"]["pa"] == 3.0 and data["config"]["relations"] == "triad_circle"
    assert data["total_cost"] == pytest.approx(sum(s["cost"] for s in data["segments"]))


def test_segment_cli_is_byte_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["segment", str(DATA / "song2.json"), "--relations", "tonnetz", "--pa", "3.5"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["silences_replaced"] == 3


def test_segment_cli_figure(tmp_path):
    fig = tmp_path / "seg.png"
    assert main(["segment", str(DATA / "song3.json"), "--out", str(tmp_path / "r.json"), "--figure", str(fig)]) == 0
    assert fig.stat().st_size > 1000


def test_cost_cli(capsys):
    assert main(["cost", "C,C,G,G", "--shape", "[[1,1],[1,1]]"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["raw_cost"] == 2 and data["vertex_costs"] == [1, 0, 1, 0]
    assert main(["cost", "C G C F"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["raw_cost"] == 3 and data["shape"] == "[[1,1],[1,1]]" and data["contrastive"] == [4]
    assert data["segment_cost"] == pytest.approx(3 + 2.8)


def test_cost_cli_unreachable_size(capsys):
    assert main(["cost", " ".join(["C"] * 11)]) == 1
    assert json.loads(capsys.readouterr().out)["cost"] is None


def test_evaluate_corpus_cli(capsys, tmp_path):
    refs = tmp_path / "refs"
    refs.mkdir()
    for path in DATA.glob("*.json"):
        (refs / f"{path.stem}.txt").write_text(" ".join(map(str, json.loads(path.read_text())["frontiers"])))
    out, tsv, figs = tmp_path / "report.json", tmp_path / "scores.tsv", tmp_path / "figs"
    code = main(["evaluate-corpus", str(DATA), "--refs", str(refs), "--out", str(out), "--tsv", str(tsv),
                 "--figures", str(figs)])
    assert code == 0
    table = capsys.readouterr().out
    header = table.splitlines()[0].split()
    assert header == ["song", "P_0", "R_0", "F_0", "P_3", "R_3", "F_3"]
    report = json.loads(out.read_text())
    assert report["corpus"]["0"]["f1"] == 1.0
    rows = [line.split("\t") for line in tsv.read_text().splitlines()]
    assert rows[-1] == ["mean"] + ["100.0"] * 6
    assert (figs / "corpus_f1.png").exists() and (figs / "song1.png").exists()


def test_evaluate_corpus_inline_refs_and_tolerance(capsys):
    assert main(["evaluate-corpus", str(DATA), "--refs", "inline", "--tolerance", "0,1,5", "--jobs", "2"]) == 0
    header = capsys.readouterr().out.splitlines()[0].split()
    assert header[1:] == ["P_0", "R_0", "F_0", "P_1", "R_1", "F_1", "P_5", "R_5", "F_5"]


def test_errors_are_structured(capsys, tmp_path):
    assert main(["segment", str(write(tmp_path, "bad.csv", "C\nX\n"))]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "LabelParseError"
    assert main(["cost", "C C C C", "--shape", "[[1,1]"]) == 1
    assert json.loads(capsys.readouterr().err)["error"] == "ShapeParseError"


def test_bad_flags_exit_nonzero(capsys):
    with pytest.raises(SystemExit) as info:
        main(["segment"])
    assert info.value.code != 0
    with pytest.raises(SystemExit) as info:
        main(["evaluate-corpus", str(DATA), "--refs", "inline", "--tolerance", "x"])
    assert info.value.code != 0
    assert "usage" in capsys.readouterr().err

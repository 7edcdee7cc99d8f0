# tests/test_report_formatter.py
import json

from utils.report_formatter import emit, format_value, render_table, render_text, rows_to_csv, to_json


class TestFormatting:
    def test_twelve_significant_digits(self):
        assert format_value(1.0 / 3.0) == "0.333333333333"
        assert format_value([0.5, True, None]) == "[0.5, True, None]"

    def test_csv_keeps_full_precision(self):
        text = rows_to_csv([{"t": 0.1, "value": 1.0 / 3.0}])
        assert text == "t,value\n0.1,0.3333333333333333\n"
        assert rows_to_csv([]) == ""

    def test_table(self):
        table = render_table([{"row": "a", "ok": True}, {"row": "bb", "ok": False}]).splitlines()
        assert table[0].split() == ["row", "ok"]
        assert len(table) == 4

    def test_text(self):
        text = render_text({"ber": 0.5, "min_t": {"t": 0.5}, "rows": [{"x": 1}]})
        assert "ber: 0.5" in text and "  t: 0.5" in text and "  - x=1" in text

    def test_json(self):
        assert json.loads(to_json({"a": [1.0, 2.0]})) == {"a": [1.0, 2.0]}


class TestEmit:
    def test_file(self, tmp_path):
        path = tmp_path / "nested" / "out.txt"
        emit("hello", str(path))
        assert path.read_text() == "hello\n"

    def test_stdout(self, capsys):
        emit("hello")
        assert capsys.readouterr().out == "hello\n"

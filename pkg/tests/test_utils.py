from mixed_moore.utils import format_kv


def test_format_kv_keeps_insertion_order():
    """Test that keys come out in insertion order, nested keys dotted."""
    lines = format_kv({"verdict": "moore", "n": 10, "degrees": {"r": 3, "z": 0}, "fixed": [1, 2]})
    assert lines == ["verdict = moore", "n = 10", "degrees.r = 3", "degrees.z = 0", "fixed = 1 2"]

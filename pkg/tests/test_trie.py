"""Weighted trie vs a brute-force dict oracle."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qacmix.trie import WeightedTrie


def oracle_top_k(entries, prefix, k):
    """Reference answer from a flat dict: positive weights only, weight desc, text asc."""
    matches = [(t, w) for t, w in entries.items() if t.startswith(prefix) and w > 0.0]
    matches.sort(key=lambda tw: (-tw[1], tw[0]))
    return matches[:k]


texts = st.text(alphabet="abc", min_size=1, max_size=6)
weights = st.floats(min_value=-5.0, max_value=10.0, allow_nan=False, width=32)


class TestBasics:
    def test_empty_trie(self):
        trie = WeightedTrie()
        assert len(trie) == 0
        assert trie.top_k("", 5) == []
        assert "x" not in trie

    def test_insert_and_lookup(self):
        trie = WeightedTrie()
        trie.insert("query", 5.0)
        trie.insert("question", 3.0)
        trie.insert("quote", 1.0)
        assert len(trie) == 3
        assert "query" in trie
        assert trie.weight_of("query") == 5.0
        assert trie.top_k("qu", 2) == [("query", 5.0), ("question", 3.0)]
        assert trie.top_k("que", 10) == [("query", 5.0), ("question", 3.0)]
        assert trie.top_k("zz", 3) == []

    def test_insert_accumulates(self):
        trie = WeightedTrie()
        trie.insert("a", 2.0)
        trie.insert("a", 3.0)
        assert trie.weight_of("a") == 5.0
        assert len(trie) == 1

    def test_tie_breaks_text_ascending(self):
        trie = WeightedTrie()
        for text in ["bb", "ab", "ba", "aa"]:
            trie.insert(text, 1.0)
        assert trie.top_k("", 4) == [("aa", 1.0), ("ab", 1.0), ("ba", 1.0), ("bb", 1.0)]

    def test_prefix_is_its_own_match(self):
        trie = WeightedTrie()
        trie.insert("car", 2.0)
        trie.insert("cart", 9.0)
        assert trie.top_k("car", 5) == [("cart", 9.0), ("car", 2.0)]

    def test_empty_text_rejected(self):
        trie = WeightedTrie()
        with pytest.raises(ValueError):
            trie.insert("", 1.0)

    def test_non_finite_weight_rejected(self):
        trie = WeightedTrie()
        with pytest.raises(ValueError):
            trie.insert("a", float("nan"))
        with pytest.raises(ValueError):
            trie.insert("a", float("inf"))

    def test_k_zero_or_negative(self):
        trie = WeightedTrie()
        trie.insert("a", 1.0)
        assert trie.top_k("", 0) == []
        assert trie.top_k("", -1) == []

    def test_negative_total_clamps_with_warning(self):
        trie = WeightedTrie()
        trie.insert("a", 2.0)
        with pytest.warns(UserWarning, match="clamping"):
            trie.insert("a", -5.0)
        assert trie.weight_of("a") == 0.0
        assert "a" in trie

    def test_zero_weight_entries_hidden_from_top_k(self):
        trie = WeightedTrie()
        trie.insert("a", 0.0)
        trie.insert("ab", 1.0)
        assert trie.top_k("", 5) == [("ab", 1.0)]

    def test_weight_decrease_updates_ordering(self):
        trie = WeightedTrie()
        trie.insert("aa", 10.0)
        trie.insert("ab", 5.0)
        trie.insert("aa", -8.0)
        assert trie.top_k("a", 2) == [("ab", 5.0), ("aa", 2.0)]


def subtree_max_invariant(node):
    """Recomputed bound for every node must equal the cached one."""
    best = node.weight if node.terminal else 0.0
    for child in node.children.values():
        best = max(best, subtree_max_invariant(child))
    assert node.max_weight == best
    return best


class TestAgainstOracle:
    @settings(max_examples=200)
    @given(
        st.lists(st.tuples(texts, weights), max_size=40),
        st.text(alphabet="abc", max_size=3),
        st.integers(min_value=0, max_value=10),
    )
    def test_top_k_matches_linear_scan(self, inserts, prefix, k):
        trie = WeightedTrie()
        entries = {}
        for text, w in inserts:
            total = entries.get(text, 0.0) + w
            if total < 0.0:
                with pytest.warns(UserWarning):
                    trie.insert(text, w)
                total = 0.0
            else:
                trie.insert(text, w)
            entries[text] = total
        assert trie.top_k(prefix, k) == oracle_top_k(entries, prefix, k)
        assert len(trie) == len(entries)
        subtree_max_invariant(trie.root)

    @settings(max_examples=100)
    @given(st.lists(st.tuples(texts, weights), max_size=40))
    def test_items_reflect_accumulated_weights(self, inserts):
        trie = WeightedTrie()
        entries = {}
        for text, w in inserts:
            total = max(entries.get(text, 0.0) + w, 0.0)
            if entries.get(text, 0.0) + w < 0.0:
                with pytest.warns(UserWarning):
                    trie.insert(text, w)
            else:
                trie.insert(text, w)
            entries[text] = total
        assert trie.items() == sorted(entries.items())

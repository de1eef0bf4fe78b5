"""Small deterministic machines with inputs, used by the TM suites."""
from frmagic.tm import parse_tm_spec

SPECS = {
    "accept_empty": """
        alphabet: a _
        states: si sf
        initial: si
        final: sf
        delta: si _ -> sf _ R
    """,
    "unary_scan": """
        alphabet: a _
        states: si sf
        initial: si
        final: sf
        delta: si a -> si a R
        delta: si _ -> sf _ R
    """,
    # accepts an even number of a's, b's are skipped
    "even_a": """
        alphabet: a b _
        states: even odd sf
        initial: even
        final: sf
        delta: even a -> odd a R
        delta: odd a -> even a R
        delta: even b -> even b R
        delta: odd b -> odd b R
        delta: even _ -> sf _ R
    """,
    # walk to the end, step back once, look for a 0
    "ends_in_0": """
        alphabet: 0 1 _
        states: scan back sf
        initial: scan
        final: sf
        delta: scan 0 -> scan 0 R
        delta: scan 1 -> scan 1 R
        delta: scan _ -> back _ L
        delta: back 0 -> sf 0 R
    """,
    "stuck": """
        alphabet: a b _
        states: si q sf
        initial: si
        final: sf
        delta: si a -> q b R
        delta: q b -> si a L
    """,
}

INPUTS = {
    "accept_empty": ["", "a", "aa", "aaa"],
    "unary_scan": ["", "a", "aaa", "aaaaa"],
    "even_a": ["", "a", "ab", "aba", "baab", "aaa"],
    "ends_in_0": ["", "0", "1", "10", "01", "110"],
    "stuck": ["", "a", "b", "ab", "ba"],
}


def machines():
    return {name: parse_tm_spec(text) for name, text in SPECS.items()}

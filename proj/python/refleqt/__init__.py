from refleqt._core import (
    Session,
    cantor_pair,
    cantor_unpair,
    compare_notations,
    concat_codes,
    decode_string,
    encode_string,
    evaluate_numeral,
    notation_code,
    notation_from_code,
    notation_successor,
    numeral,
    subst_codes,
)

__all__ = [
    "Session",
    "cantor_pair",
    "cantor_unpair",
    "compare_notations",
    "concat_codes",
    "decode_string",
    "encode_string",
    "evaluate_numeral",
    "notation_code",
    "notation_from_code",
    "notation_successor",
    "numeral",
    "subst_codes",
]

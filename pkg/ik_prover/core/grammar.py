"""
Concrete syntax for formulas, annotated sequents, labelled sequents and
polarised nested sequents.

One LALR parser serves all four entry points; each module owns the
transformer that builds its values from the parse tree.
"""

import logging
from functools import lru_cache

from lark import Lark

logger = logging.getLogger(__name__)

START_SYMBOLS = ("formula", "sequent", "labelled", "polarised")

GRAMMAR = r"""
// formulas: unary > & > | > ->, with -> right-associative
?formula: disjunction
        | disjunction "->" formula   -> imp

?disjunction: conjunction
            | disjunction "|" conjunction   -> or_

?conjunction: unary
            | conjunction "&" unary   -> and_

?unary: "box" unary     -> box
      | "[]" unary      -> box
      | "dia" unary     -> dia
      | "<>" unary      -> dia
      | "~" unary       -> neg
      | "true"          -> top
      | "false"         -> bottom
      | NAME            -> atom
      | "(" formula ")"

// annotated bi-nested sequents: G , A => D , <S> , [T]
sequent: [antecedent] "=>" [annotation] [succedent]
antecedent: formula ("," formula)*
annotation: "{" INT "}"
succedent: succ_item ("," succ_item)*
?succ_item: formula
          | "<" sequent ">"   -> iblock
          | "[" sequent "]"   -> mblock

// fully labelled sequents: x<=y; yRz; z:A |- x:A&B
labelled: [labelled_items] "|-" [labelled_items]
labelled_items: labelled_item ((";" | ",") labelled_item)*
?labelled_item: NAME "<=" NAME     -> leq_atom
              | ACC_ATOM           -> acc_atom
              | NAME ":" formula   -> labelled_formula

// polarised nested sequents: +A, -B, [ +C, {} ]
polarised: [polarised_items]
polarised_items: polarised_item ("," polarised_item)*
?polarised_item: INPUT formula                 -> input_formula
               | OUTPUT formula                -> output_formula
               | "[" [polarised_items] "]"     -> child
               | "{" "}"                       -> hole

INPUT: "+" | "•"
OUTPUT: "-" | "∘"
ACC_ATOM.2: /[A-Za-z_][A-Za-z0-9_]*\s*R\s*[A-Za-z_][A-Za-z0-9_]*/
NAME: /[A-Za-z_][A-Za-z0-9_]*/

%import common.INT
%import common.WS
%ignore WS
"""


@lru_cache(maxsize=1)
def get_parser() -> Lark:
    """Build (once) the shared LALR parser."""
    logger.debug("Building LALR parser for all concrete syntaxes")
    return Lark(
        GRAMMAR,
        start=list(START_SYMBOLS),
        parser="lalr",
        lexer="contextual",
        maybe_placeholders=True,
        propagate_positions=False,
    )

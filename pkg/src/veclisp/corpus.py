"""Bundled programs for differential testing against the reference interpreter.

Each entry is a named sequence of expressions evaluated in one shared session,
so definitions persist within an entry.  Together they reach every structural
operation, both truth outcomes, every conditional and lambda branch that a
well-formed program can reach, substitution through quoted data, capture
avoidance, recursion through the definition store, and the unknown-function
fallback with both an empty and a populated store.
"""
from __future__ import annotations

__all__ = ["PROGRAMS"]

# (name, [source expressions])
PROGRAMS: list[tuple[str, list[str]]] = [
    ("cons-atoms", ["(CONS (QUOTE A) (QUOTE B))"]),
    ("cons-nested-left", ["(CONS (CONS (QUOTE A) (QUOTE B)) (QUOTE C))"]),
    ("cons-list-tail", ["(CONS (QUOTE A) (CONS (QUOTE B) ()))"]),
    ("car-list", ["(CAR (QUOTE (A B)))"]),
    ("car-of-cons", ["(CAR (CONS (QUOTE X) (QUOTE Y)))"]),
    ("car-nested", ["(CAR (CAR (QUOTE ((A B) C))))"]),
    ("cdr-list", ["(CDR (QUOTE (A B)))"]),
    ("cdr-dotted", ["(CDR (QUOTE (A . B)))"]),
    ("cdr-twice", ["(CDR (CDR (QUOTE (A B C))))"]),
    ("car-cdr", ["(CAR (CDR (QUOTE (A B C))))"]),
    ("car-cdr-sublist", ["(CAR (CDR (QUOTE (A (B C) D))))"]),
    ("eq-true", ["(EQ (QUOTE A) (QUOTE A))"]),
    ("eq-false", ["(EQ (QUOTE A) (QUOTE B))"]),
    ("eq-nil-nil", ["(EQ () ())"]),
    ("atom-on-atom", ["(ATOM (QUOTE A))"]),
    ("atom-on-pair", ["(ATOM (QUOTE (A . B)))"]),
    ("atom-on-nil", ["(ATOM ())"]),
    ("atom-on-car", ["(ATOM (CAR (QUOTE ((X) Y))))"]),
    ("quote-atom", ["(QUOTE A)"]),
    ("quote-list", ["(QUOTE (A B C))"]),
    ("quote-dotted", ["(QUOTE (A . B))"]),
    ("quote-shields", ["(QUOTE (CAR X))"]),
    ("cond-first-clause", ["(COND ((QUOTE T) . (QUOTE A)))"]),
    ("cond-second-clause", ["(COND ((EQ (QUOTE A) (QUOTE B)) . (QUOTE X)) ((QUOTE T) . (QUOTE Y)))"]),
    ("cond-evaluates-result", ["(COND ((ATOM (QUOTE A)) . (CAR (QUOTE (W)))))"]),
    (
        "cond-pair-condition",
        ["(COND ((ATOM (QUOTE (A . B))) . (QUOTE X)) ((EQ (QUOTE C) (QUOTE C)) . (CONS (QUOTE P) (QUOTE Q))))"],
    ),
    ("cond-result-is-blend", ["(COND ((EQ (QUOTE A) (QUOTE A)) . (EQ (QUOTE B) (QUOTE C))))"]),
    ("lambda-no-params", ["((LAMBDA () (QUOTE A)))"]),
    ("lambda-identity", ["(((LAMBDA (P) P) (QUOTE A)))"]),
    ("lambda-nil-body", ["((LAMBDA (P) NIL) (QUOTE B))"]),
    ("lambda-const-atom-body", ["(((LAMBDA (P) Z) (QUOTE A)))"]),
    ("lambda-two-params-bare-args", ["((((LAMBDA (P Q) (CONS P Q)) A) B))"]),
    ("lambda-two-params-swap", ["((((LAMBDA (P Q) (CONS Q P)) (QUOTE A)) (QUOTE B)))"]),
    ("lambda-capture-avoidance", ["((((LAMBDA (P Q) (CONS P Q)) (QUOTE Q)) (QUOTE A)))"]),
    ("lambda-param-used-twice", ["(((LAMBDA (P) (CONS P P)) (QUOTE Z)))"]),
    ("lambda-list-body", ["(((LAMBDA (P) (CONS (QUOTE K) (CONS P ()))) (QUOTE Z)))"]),
    ("lambda-subst-inside-quote", ["(((LAMBDA (P) (QUOTE ((P X) Y))) (QUOTE W)))"]),
    ("lambda-subst-quoted-param", ["(((LAMBDA (P) (CONS P (QUOTE P))) (QUOTE V)))"]),
    ("lambda-residual-value", ["((LAMBDA (P) P) (QUOTE A))"]),
    ("lambda-pair-argument", ["(((LAMBDA (P) P) (CONS (QUOTE A) (QUOTE B))))"]),
    (
        "lambda-cond-body-atom-arg",
        ["(((LAMBDA (P) (COND ((ATOM P) . (QUOTE AT)) ((QUOTE T) . (QUOTE PR)))) (QUOTE A)))"],
    ),
    (
        "lambda-cond-body-pair-arg",
        ["(((LAMBDA (P) (COND ((ATOM P) . (QUOTE AT)) ((QUOTE T) . (QUOTE PR)))) (QUOTE (A . B))))"],
    ),
    ("quoted-lambda-head", ["((QUOTE (LAMBDA (P) P)) (QUOTE A))"]),
    ("define-returns-marker", ["(DEFINE NOOP (LAMBDA (P) P))"]),
    ("define-then-call", ["(DEFINE ID (LAMBDA (P) P))", "((ID (QUOTE A)))"]),
    ("define-first-of-two", ["(DEFINE K2 (LAMBDA (P Q) P))", "(((K2 (QUOTE A)) (QUOTE B)))"]),
    ("define-second-of-two", ["(DEFINE SND (LAMBDA (P Q) Q))", "(((SND (QUOTE A)) (QUOTE B)))"]),
    (
        "define-redefinition",
        ["(DEFINE F1 (LAMBDA (P) P))", "(DEFINE F1 (LAMBDA (P) (QUOTE C)))", "((F1 (QUOTE A)))"],
    ),
    (
        "define-two-entries-select",
        ["(DEFINE ID2 (LAMBDA (P) P))", "(DEFINE BOTH (LAMBDA (P) (CONS P P)))", "((BOTH (QUOTE M)))"],
    ),
    ("undefined-call-empty-store", ["(G (QUOTE X))"]),
    (
        "undefined-call-populated-store",
        ["(DEFINE WRAP (LAMBDA (P) (H P)))", "((WRAP (QUOTE A)))"],
    ),
    (
        "fcall-evaluated-argument",
        ["(DEFINE PAIR2 (LAMBDA (P Q) (CONS P Q)))", "(((PAIR2 (CAR (QUOTE (A B)))) (QUOTE C)))"],
    ),
    (
        "define-cond-eq-dispatch",
        [
            "(DEFINE ISA (LAMBDA (P) (COND ((EQ P (QUOTE A)) . (QUOTE YES)) ((QUOTE T) . (QUOTE NO)))))",
            "((ISA (QUOTE A)))",
            "((ISA (QUOTE B)))",
        ],
    ),
    (
        "recursive-last",
        [
            "(DEFINE LAST (LAMBDA (P) (COND ((ATOM (CDR P)) . (CAR P)) ((QUOTE T) . ((LAST (CDR P)))))))",
            "((LAST (QUOTE (A B C))))",
            "((LAST (QUOTE (A))))",
        ],
    ),
    ("list-build", ["(CONS (QUOTE A) (CONS (QUOTE B) (CONS (QUOTE C) ())))"]),
    (
        "define-wrap-pair-arg",
        [
            "(DEFINE TAG (LAMBDA (P) (CONS (QUOTE TAGGED) (CONS P ()))))",
            "((TAG (CONS (QUOTE A) (QUOTE B))))",
        ],
    ),
    ("cons-of-eq-results", ["(CONS (EQ (QUOTE A) (QUOTE A)) (EQ (QUOTE A) (QUOTE B)))"]),
    (
        "lambda-returning-lambda",
        ["(DEFINE MK (LAMBDA (P) (LAMBDA (Q) P)))", "((MK (QUOTE A)))", "((((MK (QUOTE A))) (QUOTE B)))"],
    ),
]

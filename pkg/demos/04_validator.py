# # Catching modelling mistakes before simulation
#
# Every rule has a stable code.  Each snippet below breaks exactly one rule.

# %%

from quanuml import parse, validate

SNIPPETS = {
    "gate after measurement": """
        model M { seq A {
          qubit q0, q1
          cbit c0, c1
          gate H on q0
          measure q0 -> c0
          gate X on q0
          measure q1 -> c1
        } }""",
    "condition read too early": """
        model M { seq A {
          qubit q0
          cbit c0
          alt c0 == 1 { gate X on q0 }
          measure q0 -> c0
        } }""",
    "idle qubit": """
        model M { seq A {
          qubit q0, spare
          cbit c0
          measure q0 -> c0
        } }""",
}

for title, text in SNIPPETS.items():
    print(f"-- {title}")
    for d in validate(parse(text, "snippet.quml")):
        print(d.render())

# Path sensitivity is conservative.  A measurement inside only one branch
# of an alt leaves the lifeline open.  Measuring in both branches ends it.

# %%

both = """
model M { seq A {
  qubit q0, q1
  cbit c0, c1
  measure q1 -> c1
  alt c1 == 1 { measure q0 -> c0 } else { measure q0 -> c0 }
  gate H on q0
} }"""
print([d.code for d in validate(parse(both))])

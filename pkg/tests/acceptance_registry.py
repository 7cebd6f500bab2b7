"""Shared record of acceptance outcomes, printed by conftest."""

# criterion number -> (title, passed, detail)
ACCEPTANCE = {}

from hypothesis import settings

# single slow CPU in CI; example counts are set per test
settings.register_profile("ci", deadline=None)
settings.load_profile("ci")

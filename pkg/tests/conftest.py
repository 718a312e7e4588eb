from hypothesis import settings

# numpy-heavy examples can trip the default per-example deadline under load
settings.register_profile("kgpoint", deadline=None)
settings.load_profile("kgpoint")

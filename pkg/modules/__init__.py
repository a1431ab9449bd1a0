from importlib import import_module
from pathlib import Path

MODULES_PATH = Path(__file__).parent


class Modules(dict):
    """registry of the counterexample constructions shipped under modules/"""

    _cache = {}

    def _populate_cache(self):
        if self._cache:
            return
        for module_path in sorted(p for p in MODULES_PATH.iterdir() if p.is_dir() and p.name not in ["__pycache__"]):
            # e.g. modules/large_diameter => large-diameter
            module = import_module(f"modules.{module_path.name}.manifest")
            self._cache[module.Manifest.id] = module.Manifest

    def __setitem__(self, key, value):
        raise RuntimeError()

    def __getitem__(self, item):
        self._populate_cache()
        return self._cache[item]

    def __contains__(self, item):
        self._populate_cache()
        return item in self._cache

    def __len__(self):
        self._populate_cache()
        return len(self._cache)

    def __iter__(self):
        self._populate_cache()
        return iter(self._cache)

    def keys(self):
        self._populate_cache()
        return self._cache.keys()

    def values(self):
        self._populate_cache()
        return self._cache.values()

    def items(self):
        self._populate_cache()
        return self._cache.items()

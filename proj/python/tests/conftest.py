import os

os.environ.setdefault("OPENBLAS_CORETYPE", "Haswell")

from .serve import run

run()

# steppers, reference solver, rough data and studies; built on core.spectral

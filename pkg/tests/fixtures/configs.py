"""
Sample run configuration documents
"""

SIR_CONFIG = {
    'model': {'name': 'multistrain_sir', 'seed': 7, 't_end': 0.5, 'replicates': 2},
    'params': {'P': 200, 'beta': 1.5, 'omega': 0.01, 'alpha': 1.0, 'm': 0.02, 'r': 0.5, 'gamma': 0.0},
    'init': {'S': 190, 'I1': 5, 'I2': 5},
    'noise': {'tau': 0.2},
}

BIVARIATE_CONFIG = {
    'model': {'name': 'bivariate_death', 'seed': 11, 't_end': 1000.0, 'replicates': 3},
    'params': {'delta': 0.5},
    'init': {'y1_0': 5, 'y2_0': 5},
    'noise': {'tau': 0.5},
}

from .dataset import Dataset, GroundTruth
from .contaminate import ContaminationModel, contaminate
from .generate import BetaPattern, Design, GenSpec, NoiseLaw, generate
from .csv_io import read_dataset_csv, write_dataset_csv

__all__ = [
    'Dataset',
    'GroundTruth',
    'ContaminationModel',
    'contaminate',
    'BetaPattern',
    'Design',
    'GenSpec',
    'NoiseLaw',
    'generate',
    'read_dataset_csv',
    'write_dataset_csv',
]

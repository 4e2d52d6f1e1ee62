from dataclasses import dataclass, field
import os
import toml
import typing

from .error import DmchainError

# Overrides `Config.workers` when set, e.g. `DMCHAIN_WORKERS=8 dmchain sweep ...`.
WORKERS_ENV_VAR = 'DMCHAIN_WORKERS'

def _is_config_type(ty):
    return isinstance(ty, type) and issubclass(ty, ConfigBase)

class ConfigBase:
    @classmethod
    def from_dict(cls, d, config_path = None, **kwargs):
        d = dict(d)
        d.update(kwargs)
        field_tys = typing.get_type_hints(cls)
        for k, v in d.items():
            if k not in field_tys:
                raise DmchainError('unknown key %r in [%s] section of %s' % (
                    k, cls.SECTION, config_path or '<dict>'))
            ty = field_tys[k]
            if _is_config_type(ty):
                d[k] = ty.from_dict(v, config_path)
        if 'config_path' in field_tys and 'config_path' not in d:
            d['config_path'] = config_path
        return cls(**d)

    @classmethod
    def from_toml_file(cls, f, **kwargs):
        if isinstance(f, str):
            path = f
            with open(f, 'r') as f:
                d = toml.load(f)
        else:
            path = f.name
            d = toml.load(f)
        return cls.from_dict(d, path, **kwargs)

def _check_range(name, r):
    if len(r) != 2 or not r[0] < r[1]:
        raise DmchainError(f'{name} must be [low, high] with low < high, got {r!r}')

@dataclass(frozen = True)
class ScanConfig(ConfigBase):
    """
    Settings for the temperature scans behind `critical_temperature` and
    `classical_threshold_temperature`.  Both scan a geometric grid of `points`
    temperatures starting at `t_min`, then bisect the bracketing interval to
    `xtol`.
    """
    SECTION = 'scan'

    points: int = 400
    t_min: float = 1e-3
    xtol: float = 1e-8
    # Upper end of the critical temperature scan, in units of
    # `max(1, |J| sqrt(1 + D^2))`.
    critical_span: float = 50.0
    # Upper end of the threshold scan, in units of `max(1, |J|)`.
    threshold_span: float = 10.0

    def __post_init__(self):
        if self.points < 2:
            raise DmchainError(f'scan.points must be at least 2, got {self.points}')
        if not self.t_min > 0:
            raise DmchainError(f'scan.t_min must be positive, got {self.t_min}')

@dataclass(frozen = True)
class QuadratureConfig(ConfigBase):
    SECTION = 'quadrature'

    n_theta: int = 32
    n_phi: int = 32

    def __post_init__(self):
        if self.n_theta < 8 or self.n_phi < 8:
            raise DmchainError('quadrature needs at least 8 nodes per angle, '
                f'got n_theta={self.n_theta}, n_phi={self.n_phi}')

@dataclass(frozen = True)
class VerifyConfig(ConfigBase):
    SECTION = 'verify'

    grid_density: int = 10
    J_range: list[float] = field(default_factory=lambda: [-2.0, 2.0])
    D_range: list[float] = field(default_factory=lambda: [0.0, 3.0])
    T_range: list[float] = field(default_factory=lambda: [0.05, 5.0])
    # The quadrature check costs ~1000x a closed-form check per point, so it
    # runs on a coarser grid with this many points per axis.
    quadrature_density: int = 5

    def __post_init__(self):
        if self.grid_density < 5:
            raise DmchainError(
                f'verify.grid_density must be at least 5, got {self.grid_density}')
        for name in ('J_range', 'D_range', 'T_range'):
            r = [float(x) for x in getattr(self, name)]
            _check_range(name, r)
            object.__setattr__(self, name, r)
        if self.T_range[0] <= 0:
            raise DmchainError(f'T_range must be positive, got {self.T_range!r}')

@dataclass(frozen = True)
class OutputConfig(ConfigBase):
    SECTION = 'output'

    format: str = 'csv'
    digits: int = 12

    def __post_init__(self):
        if self.format not in ('csv', 'json'):
            raise DmchainError(f'unknown output format {self.format!r}')

@dataclass(frozen = True)
class Config(ConfigBase):
    SECTION = 'top-level'

    config_path: str | None = None

    # Number of worker processes for sweeps.  1 evaluates cells in-process.
    workers: int = 1

    scan: ScanConfig = field(default_factory=ScanConfig)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    verify: VerifyConfig = field(default_factory=VerifyConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def __post_init__(self):
        env_workers = os.environ.get(WORKERS_ENV_VAR)
        if env_workers:
            try:
                object.__setattr__(self, 'workers', int(env_workers))
            except ValueError:
                raise DmchainError(
                    f'bad value {env_workers!r} for ${WORKERS_ENV_VAR}: expected an integer')
        if self.workers < 1:
            raise DmchainError(f'workers must be at least 1, got {self.workers}')

    @classmethod
    def load(cls, path: str | None = None, **kwargs) -> 'Config':
        """
        Load the config from `path`, or build the default config if `path` is
        `None`.  `kwargs` override top-level keys of the file.
        """
        if path is None:
            return cls.from_dict({}, None, **kwargs)
        if not os.path.exists(path):
            raise DmchainError(f'config file {path!r} does not exist')
        try:
            return cls.from_toml_file(path, **kwargs)
        except toml.TomlDecodeError as e:
            raise DmchainError(f'failed to parse {path!r}: {e}')

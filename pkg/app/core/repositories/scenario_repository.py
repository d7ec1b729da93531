import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import yaml
from pydantic import ValidationError

from app.config.settings import settings
from app.core.models.schemas import ScenarioConfig
from app.utils.exceptions import ConfigValidationError, PresetNotFoundError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

SWEEP_PARAMETERS = ("psi_d", "seed", "sigma", "c1", "c2", "c3", "c4", "k_delta", "k_xi")


class ScenarioRepository:
    """Loads scenario presets and config files into validated ScenarioConfig objects."""

    def __init__(self, preset_dir: Optional[PathLike] = None):
        self.preset_dir = Path(preset_dir or settings.preset_dir)

    def resolve(self, name_or_path: PathLike) -> Path:
        """Treat the argument as a path when it exists, otherwise as a preset name."""
        candidate = Path(name_or_path)
        if candidate.is_file():
            return candidate
        for suffix in (".yaml", ".yml"):
            preset = self.preset_dir / f"{name_or_path}{suffix}"
            if preset.is_file():
                return preset
        raise PresetNotFoundError(
            f"'{name_or_path}' is neither a file nor a preset in {self.preset_dir}"
        )

    def list_presets(self) -> List[str]:
        if not self.preset_dir.is_dir():
            return []
        return sorted(p.stem for p in self.preset_dir.glob("*.y*ml"))

    def load(self, name_or_path: PathLike) -> ScenarioConfig:
        path = self.resolve(name_or_path)
        logger.debug(f"Loading scenario from {path}")
        text = path.read_text(encoding="utf-8")
        if path.suffix == ".json":
            return self.parse_json(text, source=str(path))
        return self.parse_yaml(text, source=str(path))

    def parse_yaml(self, text: str, source: str = "<string>") -> ScenarioConfig:
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            where = f" line {mark.line + 1}, column {mark.column + 1}" if mark is not None else ""
            raise ConfigValidationError(f"{source}:{where} YAML syntax error: {getattr(e, 'problem', e)}")
        if not isinstance(data, dict):
            raise ConfigValidationError(f"{source}: top level must be a mapping")
        return self._validate(data, source, lambda loc: _yaml_line(text, loc))

    def parse_json(self, text: str, source: str = "<string>") -> ScenarioConfig:
        """Parse a JSON scenario; a run manifest is accepted and its embedded config used."""
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigValidationError(f"{source}: line {e.lineno}, column {e.colno} JSON syntax error: {e.msg}")
        if isinstance(data, dict) and "config" in data and "config_hash" in data:
            data = data["config"]
        if not isinstance(data, dict):
            raise ConfigValidationError(f"{source}: top level must be an object")
        return self._validate(data, source, lambda loc: None)

    @staticmethod
    def _validate(data: Dict[str, Any], source: str, locate) -> ScenarioConfig:
        try:
            return ScenarioConfig.model_validate(data)
        except ValidationError as e:
            messages = []
            for error in e.errors():
                field = ".".join(str(part) for part in error["loc"])
                line = locate(error["loc"])
                where = f" (line {line})" if line else ""
                messages.append(f"{field}{where}: {error['msg']}")
            raise ConfigValidationError(f"{source}: invalid scenario: {'; '.join(messages)}")

    @staticmethod
    def apply_overrides(
        config: ScenarioConfig,
        seed: Optional[int] = None,
        dt: Optional[float] = None
    ) -> ScenarioConfig:
        """Return a copy with the CLI seed / dt overrides applied and re-validated."""
        if seed is None and dt is None:
            return config
        data = config.model_dump()
        if seed is not None:
            data["simulation"]["seed"] = seed
        if dt is not None:
            data["simulation"]["dt"] = dt
        return ScenarioRepository._validate(data, f"{config.name} (overrides)", lambda loc: None)

    @staticmethod
    def with_parameter(config: ScenarioConfig, param: str, value: float) -> ScenarioConfig:
        """Copy of the scenario with one sweep parameter set."""
        if param not in SWEEP_PARAMETERS:
            raise ConfigValidationError(f"Unknown sweep parameter '{param}'; expected one of {SWEEP_PARAMETERS}")
        data = config.model_dump()
        if param == "psi_d":
            reference = data["reference"]
            key = {"tanh": "Psi_d", "step": "Psi_d", "constant": "psi0", "sine": "amplitude"}[reference["kind"]]
            reference[key] = value
        elif param == "seed":
            data["simulation"]["seed"] = int(value)
        elif param == "sigma":
            data["simulation"]["sigma"] = value
            if value > 0:
                data["simulation"]["method"] = "euler_maruyama"
        elif param in ("c1", "c2", "c3", "c4"):
            data["controller"]["gains"][param] = value
        else:
            data["cascade"][param] = value
        data["name"] = f"{config.name}_{param}_{value:g}"
        return ScenarioRepository._validate(data, data["name"], lambda loc: None)


def _yaml_line(text: str, loc: Sequence[Any]) -> Optional[int]:
    """1-based line of the deepest mapping key along loc, if it can be found."""
    try:
        node = yaml.compose(text)
    except yaml.YAMLError:
        return None
    line = None
    for part in loc:
        if not isinstance(node, yaml.MappingNode):
            break
        for key, value in node.value:
            if key.value == str(part):
                line = key.start_mark.line + 1
                node = value
                break
        else:
            break
    return line

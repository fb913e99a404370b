import os
from dataclasses import asdict

import yaml

from farey_ppsl2.entity.entity_config import RunConfig, mask
from farey_ppsl2.util.logger import logger


def load_config(path: str) -> RunConfig:
    """从 YAML 读取运行参数"""
    if not os.path.exists(path):
        err_msg = f"Configuration file '{path}' doesn't exist."
        logger.error(err_msg)
        raise FileNotFoundError(err_msg)
    with open(path, 'r', encoding='utf-8') as file:
        data = yaml.safe_load(file) or {}
    if not isinstance(data, dict):
        err_msg = f"Configuration file '{path}' must hold a mapping."
        logger.error(err_msg)
        raise ValueError(err_msg)
    unknown = set(data) - set(RunConfig.__annotations__)
    if unknown:
        err_msg = f"Configuration file '{path}' has unknown key(s): {', '.join(sorted(unknown))}."
        logger.error(err_msg)
        raise ValueError(err_msg)
    logger.info(f"Read file '{os.path.basename(path)}' into system.")
    return mask(data, RunConfig)


def save_config(config: RunConfig, path: str):
    directory = os.path.dirname(path)
    if directory and not os.path.exists(directory):
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as file:
        yaml.dump(asdict(config), file)
    logger.info(f"Saved effective configuration into '{path}'.")

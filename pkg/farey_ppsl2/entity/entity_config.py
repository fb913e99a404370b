from dataclasses import dataclass, fields
from typing import Optional, Union, get_args, get_origin


@dataclass
class RunConfig:
    """一次命令行运行的全部参数"""
    command: str = 'verify'
    target: str = ''
    max_gen: Optional[int] = None
    max_polygon: Optional[int] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    case: str = 'doe'
    word: str = ''
    terms: str = ''
    nmax: int = 64
    truncation: int = 200
    kk_truncation: int = 2000
    step: float = 1e-4
    out: Optional[str] = None
    fmt: Optional[str] = None
    config: Optional[str] = None
    save_config: Optional[str] = None


# 将读取的数据转换为dataclass对象，标量按注解类型转换（YAML 会把 1e-4 读成字符串）
def mask(v, dataclass_type):
    if not isinstance(v, dict):
        return v
    field_values = {}
    for item in fields(dataclass_type):
        if item.name not in v:
            continue
        value, kind = v[item.name], item.type
        if get_origin(kind) is Union:
            if value is None:
                field_values[item.name] = None
                continue
            kind = next(arg for arg in get_args(kind) if arg is not type(None))
        if isinstance(value, bool) or not isinstance(value, (str, int, float)):
            raise ValueError(f"field '{item.name}' expects {kind.__name__}, got {value!r}")
        field_values[item.name] = kind(value)
    return dataclass_type(**field_values)


class ConfigError(ValueError):
    """命令行或配置文件用法错误"""

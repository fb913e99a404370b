import asyncio
import sys
from typing import List, Optional

from farey_ppsl2.entity import ConfigError, RunConfig
from farey_ppsl2.infra.init_app import init_app
from farey_ppsl2.infra.init_storage import save_config
from farey_ppsl2.router.cli_router import config_from_args
from farey_ppsl2.util.logger import logger

EXIT_PASSED, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def run(config: RunConfig) -> int:
    """执行一个子命令：全部通过返回 0，有失败用例返回 1，用法错误返回 2"""
    try:
        handler = asyncio.run(init_app(config))
    except ValueError as e:
        # ConfigError 以及用例之外的参数错误
        logger.error(f'Usage error: {e}')
        return EXIT_USAGE
    if not config.out:
        sys.stdout.write(handler.render())
    return EXIT_PASSED if handler.passed else EXIT_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    try:
        config = config_from_args(argv)
        if config.save_config:
            save_config(config, config.save_config)
    except ConfigError as e:
        logger.error(f'Usage error: {e}')
        return EXIT_USAGE
    return run(config)


if __name__ == '__main__':
    sys.exit(main())

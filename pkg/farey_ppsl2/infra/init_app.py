from farey_ppsl2.entity import RunConfig
from farey_ppsl2.util.logger import info, logger
from . import emit  # noqa: F401  注册数据输出子命令
from .init_config import THREADS, init_configuration
from .report import ReportHandler
from .suite import run_suite


async def init_app(config: RunConfig) -> ReportHandler:
    logger.info('Initializing Farey PPSL2 0.1.0 verification run.')
    # Step1.初始化环境变量与报告目录
    logger.info(f'Initializing configuration with {THREADS} worker thread(s).')
    await init_configuration()
    # Step2.执行子命令对应的全部用例
    info(f'Initializing suite with seed {config.seed}.', f'{config.command} {config.target}')
    handler = await run_suite(config)
    await handler.finalizer()
    return handler

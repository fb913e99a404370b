import logging
import os
from datetime import datetime

# 日志目录与级别可由环境变量覆盖，默认写到项目根目录 logs/
LOG_DIR_ENV = 'FAREY_PPSL2_LOG_DIR'
LOG_LEVEL_ENV = 'FAREY_PPSL2_LOG_LEVEL'

log_directory = os.environ.get(LOG_DIR_ENV) or os.path.join(os.path.dirname(__file__), '..', '..', 'logs')
log_path = os.path.join(log_directory, f'farey-{datetime.now():%Y-%m-%d}.log')
os.makedirs(log_directory, exist_ok=True)

# 控制台输出走 stderr，stdout 留给报告
logging.basicConfig(
    level=os.environ.get(LOG_LEVEL_ENV, 'INFO').upper(),
    format='%(asctime)s %(levelname)-7s --- [ %(module)-12s ] %(funcName)-22s : %(message)s',
    handlers=[
        logging.FileHandler(log_path, encoding='utf-8'),
        logging.StreamHandler()
    ]
)

logger = logging.getLogger('farey_ppsl2')

# 数值库只输出ERROR日志
for _noisy in ('asyncio', 'numpy', 'scipy'):
    logging.getLogger(_noisy).setLevel(logging.ERROR)


def format_msg(msg: str, case: str = '') -> str:
    return f'[{case}] {msg}' if case else msg


def info(msg: str, case: str = ''):
    logger.info(format_msg(msg, case))


def debug(msg: str, case: str = ''):
    logger.debug(format_msg(msg, case))


def warning(msg: str, case: str = ''):
    logger.warning(format_msg(msg, case))


def error(msg: str, case: str = ''):
    logger.error(format_msg(msg, case))


def fail(msg: str, exc_type: type = ValueError):
    """记录错误并抛出异常"""
    logger.error(msg)
    raise exc_type(msg)

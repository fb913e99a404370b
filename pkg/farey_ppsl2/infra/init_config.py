import os

from farey_ppsl2.util.logger import logger

THREADS = int(os.getenv('FAREY_PPSL2_THREADS', '4'))

reports_directory = 'reports'
default_reports_path = os.path.join(os.path.dirname(__file__), '..', '..', reports_directory)
reports_path = os.getenv('FAREY_PPSL2_REPORTS', default_reports_path)

SCHEMA_VERSION = 1

# 写入每一份报告，使不同运行之间可以直接比较
CONVENTION = {
    'orientation': 'ccw = increasing s on the extended real line, infinity first',
    'right_action': 'x.A = (dp - bq)/(-cp + aq)',
    'composition': 'M_AB = M_B M_A',
    'conjugation': 'value X on arc J becomes A^-1 X A on arc J.A',
    'wavelet_sign': 'one-form tables store -normalized wavelet',
    'wp_orientation': 'clockwise as seen in the Poincare disk',
    'cocycle_scale': 2,
    'gamma_adjacent': '4/1',
    'omega_adjacent': '-2/1',
    'fourier': 'c_n = (2 pi)^-1 int f(theta) exp(-i n theta) dtheta',
}


async def init_configuration():
    if THREADS <= 0:
        err_msg = f'FAREY_PPSL2_THREADS must be positive, got {THREADS}.'
        logger.error(err_msg)
        raise ValueError(err_msg)
    if THREADS != 4:
        logger.info(f'Found specific environment variable FAREY_PPSL2_THREADS of value int({THREADS}).')
    if reports_path != default_reports_path:
        logger.info(f"Found specific environment variable FAREY_PPSL2_REPORTS of value '{reports_path}'.")
    # 确保报告目录存在
    if not os.path.exists(reports_path):
        logger.info(f"Report directory '{reports_path}' doesn't exist, now creating it.")
        os.makedirs(reports_path, exist_ok=True)


def resolve_output(out: str) -> str:
    """裸文件名写到报告目录下"""
    if os.path.dirname(out):
        return out
    return os.path.join(reports_path, out)

import csv
import io
import json
from dataclasses import asdict, is_dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

import aiofiles
import numpy as np

from farey_ppsl2.entity import CaseResult, ExtendedRational, RunConfig, Status, SuiteReport
from farey_ppsl2.infra.init_config import CONVENTION, SCHEMA_VERSION, resolve_output
from farey_ppsl2.util.default_util import FloatUtil, RationalUtil, StringUtil
from farey_ppsl2.util.logger import error, logger


def to_serializable(value: Any) -> Any:
    """报告中的数值统一为定长字符串，保证同一输入逐字节相同"""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, ExtendedRational):
        return str(value)
    if isinstance(value, Fraction):
        return RationalUtil.format(value)
    if isinstance(value, (float, np.floating)):
        return FloatUtil.format(float(value))
    if isinstance(value, (complex, np.complexfloating)):
        return FloatUtil.format_complex(complex(value))
    if hasattr(value, 'to_json'):
        return to_serializable(value.to_json())
    if isinstance(value, dict):
        return {str(to_serializable(key)): to_serializable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [to_serializable(item) for item in value]
        return sorted(items, key=str) if isinstance(value, (set, frozenset)) else items
    if isinstance(value, np.ndarray):
        return [to_serializable(item) for item in value.tolist()]
    if is_dataclass(value):
        return to_serializable(asdict(value))
    return str(value)


class ReportHandler:
    def __init__(self, suite: str, config: RunConfig):
        self.config = config
        self.report = SuiteReport(suite)
        self.rows: List[Dict[str, Any]] = []
        # 用例检查中写入的行，渲染时按用例提交顺序排列
        self.case_rows: Dict[str, List[Dict[str, Any]]] = {}

    def put_case_trace(self, case_id: str, status: Status, payload: Optional[Dict[str, Any]] = None):
        """按 case_id 更新或插入用例记录"""
        result = CaseResult(case_id, status, payload or {})
        for index, existing in enumerate(self.report.cases):
            if existing.case_id == case_id:
                self.report.cases[index] = result
                return
        self.report.cases.append(result)

    def put_row(self, row: Dict[str, Any], case_id: Optional[str] = None):
        if case_id is None:
            self.rows.append(row)
        else:
            self.case_rows.setdefault(case_id, []).append(row)

    def all_rows(self) -> List[Dict[str, Any]]:
        return self.rows + [row for case in self.report.cases for row in self.case_rows.get(case.case_id, [])]

    def put_summary(self, **values):
        self.report.summary.update(values)

    @property
    def passed(self) -> bool:
        return self.report.passed

    def document(self) -> Dict[str, Any]:
        cases = [to_serializable(case.to_json()) for case in self.report.cases]
        return {
            'schema': SCHEMA_VERSION,
            'suite': self.report.suite,
            'convention': CONVENTION,
            'config': to_serializable({key: value for key, value in asdict(self.config).items()
                                       if key not in ('out', 'config', 'save_config')}),
            'status': (Status.PASSED if self.passed else Status.FAILED).value,
            'summary': to_serializable(self.report.summary),
            'cases': cases,
            'digest': StringUtil.digest(cases),
        }

    def render(self) -> str:
        if self.config.fmt == 'csv':
            return self._render_csv()
        return json.dumps(self.document(), indent=4, sort_keys=True, ensure_ascii=False) + '\n'

    def _render_csv(self) -> str:
        rows = self.all_rows() or [{'case': case.case_id, 'status': case.status.value,
                              **{key: value for key, value in case.payload.items()
                                 if not isinstance(value, (dict, list, tuple))}}
                             for case in self.report.cases]
        header: List[str] = []
        for row in rows:
            header.extend(key for key in row if key not in header)
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=header, lineterminator='\n')
        writer.writeheader()
        for row in rows:
            writer.writerow({key: to_serializable(value) for key, value in row.items()})
        return buffer.getvalue()

    async def finalizer(self) -> Optional[str]:
        """
        报告最后处理器：有 --out 时写文件，否则只记录摘要
        """
        for failure in self.report.failures:
            error(f'(Report) {self.report.suite} {failure.status.value}.', failure.case_id)
        logger.info(f'(Report) {self.report.suite}: {len(self.report.cases) - len(self.report.failures)}'
                    f'/{len(self.report.cases)} case(s) passed.')
        if not self.config.out:
            return None
        path = resolve_output(self.config.out)
        async with aiofiles.open(path, 'w', encoding='utf-8') as file:
            await file.write(self.render())
        logger.info(f"(Report) Saved {self.config.fmt} report into '{path}'.")
        return path

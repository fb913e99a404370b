from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List


class Status(str, Enum):
    PENDING = "PENDING"
    PASSED = "PASSED"
    FAILED = "FAILED"


@dataclass
class CaseResult:
    """单个验证用例的结果"""
    case_id: str
    status: Status
    payload: Dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> Dict[str, Any]:
        return {**self.payload, 'case': self.case_id, 'status': self.status.value}


@dataclass
class SuiteReport:
    suite: str
    cases: List[CaseResult] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(case.status == Status.PASSED for case in self.cases)

    @property
    def failures(self) -> List[CaseResult]:
        return [case for case in self.cases if case.status != Status.PASSED]

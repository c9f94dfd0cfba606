from bitassist.models.channel import Channel
from bitassist.models.correlation import Correlation
from bitassist.models.status import ElementKind, LpStatus, ReportFormat
from bitassist.models.strategy import ProtocolStrategy

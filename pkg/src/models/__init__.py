"""
Database models for VoCIC.
"""

from datetime import datetime

from sqlalchemy import Column, DateTime, Integer, String, Text, UniqueConstraint
from sqlalchemy.orm import declarative_base

Base = declarative_base()


class HallPolynomialRecord(Base):
    """One cached Hall polynomial F^X_{M,N}, coefficients ascending in q."""
    __tablename__ = 'hall_polynomials'
    __table_args__ = (UniqueConstraint('lhs', 'rhs', 'total', name='uq_hall_triple'),)

    id = Column(Integer, primary_key=True)
    lhs = Column(String(500), nullable=False)
    rhs = Column(String(500), nullable=False)
    total = Column(String(500), nullable=False)
    coefficients = Column(Text, nullable=False, default="")
    created_at = Column(DateTime, default=datetime.utcnow)

    def __repr__(self):
        return f"<HallPolynomialRecord(lhs='{self.lhs}', rhs='{self.rhs}', total='{self.total}')>"

"""Group factory for resolving group implementations by id."""
from typing import Dict, List, Type, Union

from groups.se2 import SE2Group
from groups.so2 import SO2Group
from groups.t2 import T2Group
from interfaces.errors import InvalidArgumentError
from interfaces.lie_group import GroupDescriptor, GroupId, ILieGroup

GroupRef = Union[GroupId, GroupDescriptor, str]


class GroupFactory:
    """Factory for creating matrix Lie group implementations."""

    _groups: Dict[GroupId, Type[ILieGroup]] = {
        GroupId.SO2: SO2Group,
        GroupId.SE2: SE2Group,
        GroupId.T2: T2Group,
    }

    @classmethod
    def resolve_id(cls, group: GroupRef) -> GroupId:
        """Accept a GroupId, a descriptor or its string name."""
        if isinstance(group, GroupDescriptor):
            return group.id
        if isinstance(group, GroupId):
            return group
        try:
            return GroupId(str(group).upper())
        except ValueError:
            raise InvalidArgumentError(f"Unknown group: {group}") from None

    @classmethod
    def create(cls, group: GroupRef) -> ILieGroup:
        """Create group implementation instance."""
        group_id = cls.resolve_id(group)
        if group_id not in cls._groups:
            raise InvalidArgumentError(f"Unknown group: {group_id.value}")
        return cls._groups[group_id]()

    @classmethod
    def describe(cls, group: GroupRef) -> GroupDescriptor:
        """Descriptor for a group reference."""
        return cls.create(group).descriptor

    @classmethod
    def register_group(cls, group_id: GroupId, group_class: Type[ILieGroup]):
        """Register new group implementation."""
        cls._groups[group_id] = group_class

    @classmethod
    def get_available_groups(cls) -> List[str]:
        """Names of the registered groups."""
        return [group_id.value for group_id in cls._groups]

"""Exception hierarchy shared across the pipeline stages."""


class TaskGraspError(Exception):
    """Base class for all errors raised by this package."""


# Camera / point-cloud geometry


class InvalidDepth(TaskGraspError):
    """Depth value is zero or negative where a valid depth is required."""


class OutOfBounds(TaskGraspError):
    """A pixel coordinate or box lies outside the image."""


class ShapeMismatch(TaskGraspError):
    """Paired images or masks disagree on dimensions."""


class EmptyCloud(TaskGraspError):
    """An operation that needs at least one point received none."""


# Scene simulator


class SceneTooCrowded(TaskGraspError):
    """Rejection sampling could not place all requested objects."""


# Backends (shared by reasoning, grounding and grasp sources)


class BackendUnavailable(TaskGraspError):
    """A remote backend could not be reached or answered with an error."""


# Reasoning


class ReasoningError(TaskGraspError):
    """Base class for affordance-reasoning failures."""


class ParseFailure(ReasoningError):
    """The backend response had no usable structured block.

    ``fragment`` holds the offending portion of the response (or a short
    description of what was missing).
    """

    def __init__(self, message: str, fragment: str = ""):
        super().__init__(message)
        self.fragment = fragment


class MalformedReasoning(ReasoningError):
    """All parse attempts (including repair retries) failed.

    ``raw`` is the final verbatim backend response.
    """

    def __init__(self, message: str, raw: str = ""):
        super().__init__(message)
        self.raw = raw


class NoRelevantObject(ReasoningError):
    """The backend reported that nothing in the scene matches the task."""


# Grounding


class GroundingError(TaskGraspError):
    """Base class for visual grounding failures."""


class ObjectNotFound(GroundingError):
    """Object localization produced no detection for the label."""


class PartNotFound(GroundingError):
    """Part segmentation produced no pixels inside the object box."""


# Grasp synthesis / selection


class NoFeasibleGrasp(TaskGraspError):
    """The sampler accepted zero candidate pairs."""


class NoCandidates(TaskGraspError):
    """Grasp selection was invoked with an empty candidate set."""


class EmptyAffordanceRegion(TaskGraspError):
    """The affordance mask covers no valid-depth pixels."""


# Pipeline service


class TraceWriteError(TaskGraspError):
    """Persisting a run trace failed."""

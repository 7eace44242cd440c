from pydantic_settings import BaseSettings, SettingsConfigDict
from fractions import Fraction


class Settings(BaseSettings):
    """Application settings loaded from environment variables"""

    # Project Configuration
    project_name: str = "wolfes-algebra"
    environment: str = "development"

    # Logging Configuration
    log_level: str = "INFO"

    # Execution Configuration
    max_workers: int = 4
    default_format: str = "text"

    # Envelope decomposition guard (number of generator products)
    decomposition_size_guard: int = 2000

    # Verification Configuration
    verify_spot_values: str = "0:0,1/3:1,2:5/2"
    shift_samples: int = 5
    random_seed: int = 20231

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"
    )

    @property
    def spot_values_list(self) -> list[tuple[Fraction, Fraction]]:
        """Convert the "lam:nu,lam:nu" string to exact (λ, ν) pairs"""
        pairs = []
        for chunk in self.verify_spot_values.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            lam, nu = chunk.split(":")
            pairs.append((Fraction(lam.strip()), Fraction(nu.strip())))
        return pairs


# Create settings instance
settings = Settings()

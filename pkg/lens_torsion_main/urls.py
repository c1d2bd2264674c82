"""URL configuration for lens_torsion_main project."""
from django.urls import include, path

urlpatterns = [
    path('torsion/', include("torsion.urls")),
]

from django.urls import path
from .views import ComputeView, OracleView

urlpatterns = [
    path("compute/", ComputeView.as_view(), name="compute"),
    path("oracle/<int:p>/<int:q>/", OracleView.as_view(), name="oracle"),
]

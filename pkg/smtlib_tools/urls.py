from django.urls import include, path
from rest_framework import routers

from . import views

router = routers.DefaultRouter()
router.register(r"history", views.SolveHistoryViewSet)

app_name = "smtlib_tools"

urlpatterns = [
    path("api/solve/", views.solve, name="solve"),
    path("api/", include(router.urls)),
]
